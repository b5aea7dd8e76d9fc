#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/corpus.hpp"
#include "wsd/features.hpp"
#include "wsd/naive_bayes.hpp"

namespace wsd {

enum class VoteKind {
  majority,         // best member per range category, plurality vote
  weighted,         // same members, summed log joint probabilities
  all81,            // plurality over the whole grid
  single_category,  // plurality over the nine specs of one category
};

struct VoteRule {
  VoteKind kind = VoteKind::majority;
  RangeCategory category{};  // single_category only

  // "majority", "weighted", "all81" or "category=<left>,<right>" where each
  // side is narrow, medium or wide. Throws InvalidArgument.
  static VoteRule parse(std::string_view text);

  friend bool operator==(const VoteRule& a, const VoteRule& b) {
    return a.kind == b.kind &&
           (a.kind != VoteKind::single_category || a.category == b.category);
  }
};

std::string to_string(const VoteRule& rule);

struct GridEntry {
  WindowSpec spec;
  std::shared_ptr<const NaiveBayesModel> model;
  double devtest_accuracy = 0.0;
};

/// One model per grid spec, all trained on the same split with the same
/// epsilon and scored on the same devtest split. Entries are in grid order.
class ClassifierGrid {
 public:
  explicit ClassifierGrid(std::vector<GridEntry> entries);

  std::span<const GridEntry> entries() const noexcept { return entries_; }
  const GridEntry& at(const WindowSpec& spec) const {
    return entries_[spec.grid_index()];
  }

 private:
  std::vector<GridEntry> entries_;
};

struct GridOptions {
  double epsilon = kDefaultEpsilon;
  ScoringMode scoring = ScoringMode::bernoulli;
  // Worker threads; 0 picks the hardware concurrency. Results do not depend
  // on this value.
  unsigned threads = 0;
};

/// Trains all 81 models on `train` and measures each on `devtest`.
/// Throws ContaminationError if the splits share an instance id,
/// TrainingError if either is empty.
ClassifierGrid train_grid(const Corpus& train, const Corpus& devtest,
                          const GridOptions& options = {});

struct Member {
  RangeCategory category;
  WindowSpec spec;
  std::shared_ptr<const NaiveBayesModel> model;
  double devtest_accuracy = 0.0;
};

// Per-sense tally from one vote.
struct VoteTally {
  std::vector<std::size_t> votes;
  std::vector<double> summed_log_joint;
  std::size_t winner = 0;
};

/// A set of member classifiers and the rule that combines them.
///
/// Majority and weighted ensembles hold exactly one member per range
/// category; all81 holds one member per grid spec; single_category holds
/// nine members of the named category. All members must share one sense
/// inventory. Members are kept in (category, spec) order so the result of a
/// vote does not depend on the order they were supplied in.
class Ensemble {
 public:
  Ensemble(std::vector<Member> members, VoteRule rule);

  std::span<const Member> members() const noexcept { return members_; }
  const VoteRule& rule() const noexcept { return rule_; }
  std::span<const std::string> senses() const noexcept {
    return members_.front().model->senses();
  }

  /// Plurality rules: most votes wins, then the larger summed log joint over
  /// the tied senses, then the earlier sense. Weighted: largest summed log
  /// joint, then the earlier sense.
  VoteTally tally(const Instance& instance) const;
  std::size_t vote_index(const Instance& instance) const { return tally(instance).winner; }
  const std::string& vote(const Instance& instance) const;

  std::vector<std::string> classify_batch(std::span<const Instance> instances) const;

 private:
  std::vector<Member> members_;
  VoteRule rule_;
};

/// Picks members from a grid according to the rule. For majority and
/// weighted rules, each category contributes its highest devtest accuracy;
/// ties go to the smallest total window, then the smallest left window,
/// then the smallest right window.
Ensemble select_members(const ClassifierGrid& grid,
                        const VoteRule& rule = VoteRule{});

// Best entry among specs, by devtest accuracy with the tie rule above.
const GridEntry& best_entry(const ClassifierGrid& grid,
                            std::span<const WindowSpec> specs);

/// Manifest file: the vote rule and one row per member naming its category,
/// spec, model file (relative to the manifest's directory) and devtest
/// accuracy. save_manifest writes the member models under
/// <dir>/models/ and the manifest to <dir>/manifest.tsv.
inline constexpr int kManifestFormatVersion = 1;

void save_manifest(const Ensemble& ensemble, const std::string& directory);
// Throws LoadError subclasses for the manifest or any member model.
Ensemble load_manifest(const std::string& manifest_path);

}  // namespace wsd
