#include "wsd/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "wsd/error.hpp"

namespace wsd {
namespace fs = std::filesystem;

VoteRule VoteRule::parse(std::string_view text) {
  if (text == "majority") return {VoteKind::majority, {}};
  if (text == "weighted") return {VoteKind::weighted, {}};
  if (text == "all81") return {VoteKind::all81, {}};
  constexpr std::string_view prefix = "category=";
  if (text.starts_with(prefix)) {
    return {VoteKind::single_category,
            parse_range_category(text.substr(prefix.size()))};
  }
  throw InvalidArgument("unknown vote rule '" + std::string(text) + "'");
}

std::string to_string(const VoteRule& rule) {
  switch (rule.kind) {
    case VoteKind::majority: return "majority";
    case VoteKind::weighted: return "weighted";
    case VoteKind::all81: return "all81";
    case VoteKind::single_category: return "category=" + to_string(rule.category);
  }
  return "?";
}

ClassifierGrid::ClassifierGrid(std::vector<GridEntry> entries)
    : entries_(std::move(entries)) {
  const auto& specs = grid_specs();
  if (entries_.size() != specs.size()) {
    throw InvalidArgument("a classifier grid needs exactly 81 entries");
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!(entries_[i].spec == specs[i]) || !entries_[i].model ||
        !(entries_[i].model->spec() == specs[i])) {
      throw InvalidArgument("grid entry " + std::to_string(i) +
                            " does not match " + to_string(specs[i]));
    }
  }
}

ClassifierGrid train_grid(const Corpus& train, const Corpus& devtest,
                          const GridOptions& options) {
  if (train.empty()) throw TrainingError("training split is empty");
  if (devtest.empty()) throw TrainingError("devtest split is empty");
  {
    std::unordered_set<std::string_view> ids;
    for (const auto& inst : train.instances()) ids.insert(inst.id);
    for (const auto& inst : devtest.instances()) {
      if (ids.contains(inst.id)) {
        throw ContaminationError("instance '" + inst.id +
                                 "' is in both the training and devtest splits");
      }
    }
  }

  const auto& specs = grid_specs();
  std::vector<GridEntry> entries(specs.size(), GridEntry{WindowSpec(0, 0), nullptr, 0.0});
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        auto model = std::make_shared<const NaiveBayesModel>(
            NaiveBayesModel::train(train, specs[i], options.epsilon, options.scoring));
        std::size_t correct = 0;
        for (const auto& inst : devtest.instances()) {
          if (model->classify(inst) == inst.sense) ++correct;
        }
        entries[i] = GridEntry{specs[i], std::move(model),
                               static_cast<double>(correct) /
                                   static_cast<double>(devtest.size())};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  unsigned threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(specs.size()));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return ClassifierGrid(std::move(entries));
}

Ensemble::Ensemble(std::vector<Member> members, VoteRule rule)
    : members_(std::move(members)), rule_(rule) {
  if (members_.empty()) throw InvalidArgument("an ensemble needs members");
  for (const auto& m : members_) {
    if (!m.model) throw InvalidArgument("ensemble member without a model");
    if (!std::ranges::equal(m.model->senses(), members_.front().model->senses())) {
      throw InvalidArgument("ensemble members disagree on the sense inventory");
    }
  }
  std::sort(members_.begin(), members_.end(), [](const Member& a, const Member& b) {
    if (a.category.index() != b.category.index()) {
      return a.category.index() < b.category.index();
    }
    return a.spec < b.spec;
  });

  switch (rule_.kind) {
    case VoteKind::majority:
    case VoteKind::weighted:
      if (members_.size() != 9) {
        throw InvalidArgument(to_string(rule_) + " ensemble needs 9 members");
      }
      for (std::size_t i = 0; i < 9; ++i) {
        if (members_[i].category.index() != i) {
          throw InvalidArgument(to_string(rule_) +
                                " ensemble needs one member per range category");
        }
      }
      break;
    case VoteKind::all81: {
      if (members_.size() != 81) throw InvalidArgument("all81 ensemble needs 81 members");
      std::vector<bool> seen(81, false);
      for (const auto& m : members_) {
        const auto idx = m.spec.grid_index();
        if (seen[idx]) throw InvalidArgument("all81 ensemble repeats " + to_string(m.spec));
        seen[idx] = true;
      }
      break;
    }
    case VoteKind::single_category:
      if (members_.size() != 9) {
        throw InvalidArgument("single-category ensemble needs 9 members");
      }
      for (const auto& m : members_) {
        if (!(m.category == rule_.category)) {
          throw InvalidArgument("member " + to_string(m.spec) + " is outside " +
                                to_string(rule_.category));
        }
      }
      break;
  }
}

VoteTally Ensemble::tally(const Instance& instance) const {
  const std::size_t n_senses = senses().size();
  VoteTally t{std::vector<std::size_t>(n_senses, 0), std::vector<double>(n_senses, 0.0), 0};
  for (const auto& m : members_) {
    const auto scores = m.model->log_joints(extract(instance, m.model->spec()));
    const std::size_t choice = [&] {
      std::vector<std::size_t> counts(n_senses);
      for (std::size_t s = 0; s < n_senses; ++s) counts[s] = m.model->training_count(s);
      return argmax_with_ties(scores, counts);
    }();
    ++t.votes[choice];
    for (std::size_t s = 0; s < n_senses; ++s) t.summed_log_joint[s] += scores[s];
  }

  std::size_t best = 0;
  for (std::size_t s = 1; s < n_senses; ++s) {
    const bool tied_sum = scores_tied(t.summed_log_joint[s], t.summed_log_joint[best]);
    if (rule_.kind == VoteKind::weighted) {
      if (!tied_sum && t.summed_log_joint[s] > t.summed_log_joint[best]) best = s;
    } else if (t.votes[s] > t.votes[best] ||
               (t.votes[s] == t.votes[best] && !tied_sum &&
                t.summed_log_joint[s] > t.summed_log_joint[best])) {
      best = s;
    }
  }
  t.winner = best;
  return t;
}

const std::string& Ensemble::vote(const Instance& instance) const {
  return senses()[vote_index(instance)];
}

std::vector<std::string> Ensemble::classify_batch(std::span<const Instance> instances) const {
  std::vector<std::string> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(vote(inst));
  return out;
}

const GridEntry& best_entry(const ClassifierGrid& grid,
                            std::span<const WindowSpec> specs) {
  if (specs.empty()) throw InvalidArgument("no specs to choose from");
  const GridEntry* best = &grid.at(specs.front());
  for (const auto& spec : specs.subspan(1)) {
    const GridEntry& e = grid.at(spec);
    const auto key = [](const GridEntry& g) {
      return std::tuple(-g.devtest_accuracy, g.spec.total(), g.spec.left(), g.spec.right());
    };
    if (key(e) < key(*best)) best = &e;
  }
  return *best;
}

Ensemble select_members(const ClassifierGrid& grid, const VoteRule& rule) {
  std::vector<Member> members;
  const auto add = [&](const GridEntry& e) {
    members.push_back(Member{category_of(e.spec), e.spec, e.model, e.devtest_accuracy});
  };
  switch (rule.kind) {
    case VoteKind::majority:
    case VoteKind::weighted:
      for (std::size_t c = 0; c < 9; ++c) {
        add(best_entry(grid, category_specs(RangeCategory::from_index(c))));
      }
      break;
    case VoteKind::all81:
      for (const auto& e : grid.entries()) add(e);
      break;
    case VoteKind::single_category:
      for (const auto& spec : category_specs(rule.category)) add(grid.at(spec));
      break;
  }
  return Ensemble(std::move(members), rule);
}

namespace {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_tabs(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string field;
  while (std::getline(in, field, '\t')) out.push_back(field);
  if (!s.empty() && s.back() == '\t') out.emplace_back();
  return out;
}

template <typename T>
T parse_field(const std::string& text, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError(std::string("bad ") + what + " '" + text + "' in manifest");
  }
  return value;
}

}  // namespace

void save_manifest(const Ensemble& ensemble, const std::string& directory) {
  const fs::path dir(directory);
  fs::create_directories(dir / "models");
  std::ostringstream out;
  out << "wsd-ensemble\t" << kManifestFormatVersion << '\n';
  out << "vote\t" << to_string(ensemble.rule()) << '\n';
  out << "members\t" << ensemble.members().size() << '\n';
  for (const auto& m : ensemble.members()) {
    const std::string rel = "models/nb-" + std::to_string(m.spec.left()) + "-" +
                            std::to_string(m.spec.right()) + ".model";
    save_model_file(*m.model, (dir / rel).string());
    out << "member\t" << to_string(m.category) << '\t' << m.spec.left() << '\t'
        << m.spec.right() << '\t' << rel << '\t' << format_real(m.devtest_accuracy)
        << '\n';
  }
  std::ofstream file(dir / "manifest.tsv", std::ios::binary);
  if (!(file << out.str()) || !file.flush()) {
    throw Error("cannot write manifest in '" + directory + "'");
  }
}

Ensemble load_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw LoadError("cannot open manifest '" + manifest_path + "'");
  const fs::path base = fs::path(manifest_path).parent_path();

  std::string line;
  if (!std::getline(in, line)) throw TruncatedError("manifest is empty");
  auto header = split_tabs(line);
  if (header.size() != 2 || header[0] != "wsd-ensemble") {
    throw FormatError("not an ensemble manifest");
  }
  if (parse_field<int>(header[1], "version") != kManifestFormatVersion) {
    throw VersionError("unsupported manifest version " + header[1]);
  }
  if (!std::getline(in, line)) throw TruncatedError("manifest ends before 'vote'");
  auto vote = split_tabs(line);
  if (vote.size() != 2 || vote[0] != "vote") throw FormatError("expected 'vote' line");
  VoteRule rule;
  try {
    rule = VoteRule::parse(vote[1]);
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
  if (!std::getline(in, line)) throw TruncatedError("manifest ends before 'members'");
  auto count = split_tabs(line);
  if (count.size() != 2 || count[0] != "members") {
    throw FormatError("expected 'members' line");
  }
  const auto n = parse_field<std::size_t>(count[1], "member count");

  std::vector<Member> members;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw TruncatedError("manifest ends mid member table");
    auto f = split_tabs(line);
    if (f.size() != 6 || f[0] != "member") throw FormatError("bad member row");
    try {
      WindowSpec spec(parse_field<int>(f[2], "window"), parse_field<int>(f[3], "window"));
      auto model = std::make_shared<const NaiveBayesModel>(
          load_model_file((base / f[4]).string()));
      if (!(model->spec() == spec)) {
        throw FormatError("model " + f[4] + " does not have spec " + to_string(spec));
      }
      members.push_back(Member{parse_range_category(f[1]), spec, std::move(model),
                               parse_field<double>(f[5], "accuracy")});
    } catch (const InvalidArgument& e) {
      throw FormatError(e.what());
    }
  }
  try {
    return Ensemble(std::move(members), rule);
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

}  // namespace wsd
