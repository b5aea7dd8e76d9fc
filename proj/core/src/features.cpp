#include "wsd/features.hpp"

#include <algorithm>

#include "wsd/error.hpp"

namespace wsd {

bool is_window_size(int size) noexcept {
  return std::find(kWindowSizes.begin(), kWindowSizes.end(), size) !=
         kWindowSizes.end();
}

std::size_t window_size_index(int size) {
  const auto it = std::find(kWindowSizes.begin(), kWindowSizes.end(), size);
  if (it == kWindowSizes.end()) {
    throw InvalidArgument("illegal window size " + std::to_string(size));
  }
  return static_cast<std::size_t>(it - kWindowSizes.begin());
}

WindowSpec::WindowSpec(int left, int right) : left_(left), right_(right) {
  window_size_index(left);
  window_size_index(right);
}

std::size_t WindowSpec::grid_index() const {
  return window_size_index(left_) * kWindowSizes.size() +
         window_size_index(right_);
}

std::string to_string(const WindowSpec& spec) {
  return "(" + std::to_string(spec.left()) + "," + std::to_string(spec.right()) +
         ")";
}

Range range_of(int size) {
  const auto i = window_size_index(size);
  return static_cast<Range>(i / 3);
}

std::string_view to_string(Range range) {
  switch (range) {
    case Range::narrow: return "narrow";
    case Range::medium: return "medium";
    case Range::wide: return "wide";
  }
  return "?";
}

Range parse_range(std::string_view name) {
  if (name == "narrow") return Range::narrow;
  if (name == "medium") return Range::medium;
  if (name == "wide") return Range::wide;
  throw InvalidArgument("unknown range '" + std::string(name) + "'");
}

RangeCategory RangeCategory::from_index(std::size_t index) {
  if (index >= 9) throw InvalidArgument("range category index out of range");
  return {static_cast<Range>(index / 3), static_cast<Range>(index % 3)};
}

std::string to_string(const RangeCategory& category) {
  return std::string(to_string(category.left)) + "," +
         std::string(to_string(category.right));
}

RangeCategory parse_range_category(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw InvalidArgument("range category must be '<left>,<right>', got '" +
                          std::string(text) + "'");
  }
  return {parse_range(text.substr(0, comma)), parse_range(text.substr(comma + 1))};
}

RangeCategory category_of(const WindowSpec& spec) {
  return {range_of(spec.left()), range_of(spec.right())};
}

const std::vector<WindowSpec>& grid_specs() {
  static const std::vector<WindowSpec> specs = [] {
    std::vector<WindowSpec> out;
    out.reserve(kWindowSizes.size() * kWindowSizes.size());
    for (const int l : kWindowSizes) {
      for (const int r : kWindowSizes) out.emplace_back(l, r);
    }
    return out;
  }();
  return specs;
}

std::vector<WindowSpec> category_specs(const RangeCategory& category) {
  std::vector<WindowSpec> out;
  for (const auto& spec : grid_specs()) {
    if (category_of(spec) == category) out.push_back(spec);
  }
  return out;
}

FeatureSet::FeatureSet(std::vector<std::string> words) : words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
}

bool FeatureSet::contains(std::string_view word) const {
  return std::binary_search(words_.begin(), words_.end(), word);
}

FeatureSet extract(const Instance& instance, const WindowSpec& spec) {
  const auto& tokens = instance.tokens;
  const std::size_t target = instance.target_index;
  const auto left = static_cast<std::size_t>(spec.left());
  const auto right = static_cast<std::size_t>(spec.right());
  const std::size_t begin = target > left ? target - left : 0;
  const std::size_t end = std::min(tokens.size(), target + right + 1);

  std::vector<std::string> words;
  words.reserve(left + right);
  for (std::size_t j = begin; j < end; ++j) {
    if (j != target) words.push_back(tokens[j]);
  }
  return FeatureSet(std::move(words));
}

}  // namespace wsd
