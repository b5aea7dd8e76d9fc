#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/corpus.hpp"

namespace wsd {

// The nine legal window sizes, ascending.
inline constexpr std::array<int, 9> kWindowSizes = {0, 1, 2, 3, 4, 5, 10, 25, 50};

bool is_window_size(int size) noexcept;

// Index of size in kWindowSizes. Throws InvalidArgument.
std::size_t window_size_index(int size);

/// Left/right window sizes of one grid classifier. Both sides must be one of
/// kWindowSizes; the constructor throws InvalidArgument otherwise.
class WindowSpec {
 public:
  WindowSpec(int left, int right);

  int left() const noexcept { return left_; }
  int right() const noexcept { return right_; }
  int total() const noexcept { return left_ + right_; }

  // Row-major position in grid_specs().
  std::size_t grid_index() const;

  friend auto operator<=>(const WindowSpec&, const WindowSpec&) = default;

 private:
  int left_;
  int right_;
};

std::string to_string(const WindowSpec& spec);  // "(l,r)"

enum class Range { narrow, medium, wide };

Range range_of(int size);
std::string_view to_string(Range range);
Range parse_range(std::string_view name);

struct RangeCategory {
  Range left;
  Range right;

  // 0..8, left-major.
  std::size_t index() const noexcept {
    return static_cast<std::size_t>(left) * 3 + static_cast<std::size_t>(right);
  }
  static RangeCategory from_index(std::size_t index);

  friend auto operator<=>(const RangeCategory&, const RangeCategory&) = default;
};

std::string to_string(const RangeCategory& category);  // "narrow,medium"
// Accepts the to_string form. Throws InvalidArgument.
RangeCategory parse_range_category(std::string_view text);

RangeCategory category_of(const WindowSpec& spec);

// All 81 specs, left ascending then right ascending.
const std::vector<WindowSpec>& grid_specs();

// The nine specs of one category, in grid order.
std::vector<WindowSpec> category_specs(const RangeCategory& category);

/// Binary co-occurrence features: the distinct word types in the window.
/// Stored sorted; no positions are kept.
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(std::vector<std::string> words);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  auto begin() const noexcept { return words_.begin(); }
  auto end() const noexcept { return words_.end(); }
  const std::vector<std::string>& words() const noexcept { return words_; }

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

 private:
  std::vector<std::string> words_;
};

/// Words at positions [target - left, target) and (target, target + right],
/// clamped to the instance. The target position itself is never included.
FeatureSet extract(const Instance& instance, const WindowSpec& spec);

}  // namespace wsd
