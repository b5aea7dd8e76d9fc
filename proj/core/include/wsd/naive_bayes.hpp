#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/corpus.hpp"
#include "wsd/features.hpp"

namespace wsd {

inline constexpr double kDefaultEpsilon = 1e-6;

/// How a feature set is scored against a sense.
///  bernoulli: every vocabulary word contributes, p(w|s) when present and
///             1 - p(w|s) when absent.
///  presence:  only present vocabulary words contribute p(w|s).
enum class ScoringMode { bernoulli, presence };

std::string_view to_string(ScoringMode mode);
ScoringMode parse_scoring_mode(std::string_view name);

/// Two log scores are treated as tied when they differ by no more than
/// 1e-9 relative to their magnitude (absolute for magnitudes below 1). Scores
/// are sums of thousands of logs whose summation order varies between
/// equivalent computations, so exact comparison would make tie-breaking
/// depend on rounding noise.
bool scores_tied(double a, double b) noexcept;

/// A smoothed binary-feature Naive Bayes classifier for one window spec.
///
/// Parameters are relative frequencies: p(s) = n(s)/N and p(w|s) = n(w,s)/n(s)
/// where n(w,s) counts sense-s training instances whose window contains w.
/// A zero prior is floored to epsilon and the priors renormalized; a zero
/// conditional becomes epsilon and a conditional of one becomes 1 - epsilon.
/// The raw counts are kept alongside the smoothed parameters.
class NaiveBayesModel {
 public:
  // Throws TrainingError for an empty corpus, InvalidArgument for epsilon
  // outside (0, 1).
  static NaiveBayesModel train(const Corpus& corpus, const WindowSpec& spec,
                               double epsilon = kDefaultEpsilon,
                               ScoringMode scoring = ScoringMode::bernoulli);

  /// Assembles a model from stored parameters (used by load_model). Checks
  /// shapes and parameter ranges, throws FormatError.
  static NaiveBayesModel from_parameters(
      WindowSpec spec, double epsilon, ScoringMode scoring,
      std::vector<std::string> senses, std::vector<std::size_t> sense_counts,
      std::vector<double> priors, std::vector<std::string> vocabulary,
      std::vector<std::size_t> word_counts, std::vector<double> conditionals);

  const WindowSpec& spec() const noexcept { return spec_; }
  double epsilon() const noexcept { return epsilon_; }
  ScoringMode scoring() const noexcept { return scoring_; }
  std::span<const std::string> senses() const noexcept { return senses_; }
  std::span<const std::string> vocabulary() const noexcept { return vocabulary_; }
  std::size_t sense_count() const noexcept { return senses_.size(); }
  std::size_t instance_count() const noexcept { return instance_count_; }

  // n(s)
  std::size_t training_count(std::size_t sense) const { return sense_counts_.at(sense); }
  // n(w,s), word by vocabulary index
  std::size_t cooccurrence_count(std::size_t word, std::size_t sense) const {
    return word_counts_.at(word * senses_.size() + sense);
  }
  double prior(std::size_t sense) const { return priors_.at(sense); }
  double conditional(std::size_t word, std::size_t sense) const {
    return conditionals_.at(word * senses_.size() + sense);
  }

  std::optional<std::size_t> word_index(std::string_view word) const;
  std::optional<std::size_t> find_sense(std::string_view sense) const;

  /// Natural-log joint probability of the features with one sense. Words
  /// outside the vocabulary contribute nothing. Throws UnknownSenseError.
  double log_joint(const FeatureSet& features, std::string_view sense) const;
  double log_joint(const FeatureSet& features, std::size_t sense) const;

  // log_joint for every sense, in sense order.
  std::vector<double> log_joints(const FeatureSet& features) const;

  /// Most probable sense index. Ties go to the larger training count, then
  /// to the earlier sense.
  std::size_t classify_index(const FeatureSet& features) const;
  std::size_t classify_index(const Instance& instance) const;
  const std::string& classify(const Instance& instance) const;

  friend bool operator==(const NaiveBayesModel& a, const NaiveBayesModel& b);

 private:
  NaiveBayesModel(WindowSpec spec) : spec_(spec) {}
  void finalize();
  // scores[s] = log joint of sense s; scores holds sense_count() entries.
  void accumulate(const FeatureSet& features, double* scores) const;

  WindowSpec spec_;
  double epsilon_ = kDefaultEpsilon;
  ScoringMode scoring_ = ScoringMode::bernoulli;
  std::size_t instance_count_ = 0;
  std::vector<std::string> senses_;
  std::vector<std::size_t> sense_counts_;
  std::vector<double> priors_;
  std::vector<std::string> vocabulary_;  // sorted
  std::vector<std::size_t> word_counts_;  // row-major [word][sense]
  std::vector<double> conditionals_;      // row-major [word][sense]

  // Derived at finalize(): score(s) = base[s] + sum over present words of
  // weight[w][s].
  std::vector<double> base_;
  std::vector<double> weights_;
  // Open-addressing table of vocabulary indices (kEmptySlot when free),
  // power-of-two sized, probed linearly from the word's hash.
  static constexpr std::uint32_t kEmptySlot = 0xffffffffu;
  std::vector<std::uint32_t> slots_;
};

/// Index of the best score. Ties (scores_tied) go to the larger count, then to
/// the lower index.
std::size_t argmax_with_ties(std::span<const double> scores,
                             std::span<const std::size_t> counts);

// Text model file; see model_io.cpp for the layout.
inline constexpr int kModelFormatVersion = 1;

void save_model(const NaiveBayesModel& model, std::ostream& out);
// Throws VersionError, TruncatedError, ChecksumError, FormatError.
NaiveBayesModel load_model(std::istream& in);

void save_model_file(const NaiveBayesModel& model, const std::string& path);
NaiveBayesModel load_model_file(const std::string& path);

}  // namespace wsd
