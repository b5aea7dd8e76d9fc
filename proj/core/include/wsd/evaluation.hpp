#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wsd/corpus.hpp"
#include "wsd/ensemble.hpp"

namespace wsd {

/// Cross-validation plan. Positions refer to the corpus the plan was made
/// for. Folds are contiguous blocks of one seeded shuffle, the first
/// (n mod k) of them one larger; each fold is then split into a devtest half
/// and a test half, devtest taking the extra instance when the fold is odd.
struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  bool stratified_halves = false;
  std::vector<std::size_t> fold_of;                // corpus position -> fold
  std::vector<std::vector<std::size_t>> devtest;   // per fold
  std::vector<std::vector<std::size_t>> test;      // per fold

  std::size_t fold_size(std::size_t fold) const {
    return devtest[fold].size() + test[fold].size();
  }
  // Every position outside the fold, ascending.
  std::vector<std::size_t> training_positions(std::size_t fold) const;
};

/// Throws InvalidArgument when k < 2 or the corpus has fewer than 2k
/// instances. With stratify_halves each fold is split so every sense is
/// divided as evenly as possible between the halves.
FoldPlan make_fold_plan(const Corpus& corpus, std::size_t k, std::uint64_t seed,
                        bool stratify_halves = false);

// Fraction of equal entries. Throws InvalidArgument on length mismatch or
// empty input.
double accuracy(std::span<const std::string> predicted,
                std::span<const std::string> gold);
double accuracy(std::span<const std::size_t> predicted,
                std::span<const std::size_t> gold);

enum class McNemarMethod { chi2, exact };
std::string_view to_string(McNemarMethod method);
McNemarMethod parse_mcnemar_method(std::string_view name);

// Critical value of chi-square with one degree of freedom at p = .01.
inline constexpr double kChiSquareCritical01 = 6.635;

struct McNemarResult {
  std::size_t only_a_correct = 0;  // b
  std::size_t only_b_correct = 0;  // c
  double statistic = 0.0;          // (|b - c| - 1)^2 / (b + c), 0 when b + c = 0
  double p_value = 1.0;
  bool significant = false;
  McNemarMethod method = McNemarMethod::chi2;
};

/// chi2: significant iff statistic > 6.635, p from the chi-square(1)
/// survival function. exact: two-sided binomial test on the discordant pairs,
/// significant iff p < .01. The statistic is reported either way.
McNemarResult mcnemar_from_counts(std::size_t only_a_correct,
                                  std::size_t only_b_correct,
                                  McNemarMethod method = McNemarMethod::chi2);

// Throws InvalidArgument on length mismatch.
McNemarResult mcnemar(std::span<const std::string> predicted_a,
                      std::span<const std::string> predicted_b,
                      std::span<const std::string> gold,
                      McNemarMethod method = McNemarMethod::chi2);
McNemarResult mcnemar(std::span<const std::size_t> predicted_a,
                      std::span<const std::size_t> predicted_b,
                      std::span<const std::size_t> gold,
                      McNemarMethod method = McNemarMethod::chi2);

// Per-spec values in grid order.
using SpecGrid = std::array<double, 81>;

struct ExperimentConfig {
  std::size_t k = 5;
  std::uint64_t seed = 0;
  double epsilon = kDefaultEpsilon;
  ScoringMode scoring = ScoringMode::bernoulli;
  VoteRule vote{};
  bool stratify_halves = false;
  McNemarMethod mcnemar = McNemarMethod::chi2;
  unsigned threads = 0;  // not echoed; results do not depend on it
};

struct FoldResult {
  std::size_t train_size = 0;
  std::size_t devtest_size = 0;
  std::size_t test_size = 0;
  SpecGrid devtest_accuracy{};
  SpecGrid test_accuracy{};
  std::vector<Member> members;  // the selected ensemble
  double ensemble_test_accuracy = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string target_word;
  std::vector<std::string> senses;
  std::size_t instance_count = 0;

  std::vector<FoldResult> folds;
  SpecGrid mean_devtest{};
  SpecGrid std_devtest{};  // sample standard deviation, divisor k - 1

  double ensemble_test_accuracy = 0.0;  // mean over folds
  WindowSpec best_single{0, 0};          // highest mean devtest accuracy
  double best_single_test_accuracy = 0.0;
  McNemarResult mcnemar;                 // pooled ensemble vs best single
};

// Called once per fold with the fold index and its ensemble.
using EnsembleObserver = std::function<void(std::size_t, const Ensemble&)>;

/// Runs k rounds: train the grid on the other folds, score it on the round's
/// devtest half, select members, and evaluate the ensemble and every grid
/// model on the test half. The best single classifier is the spec with the
/// highest mean devtest accuracy (same tie rule as member selection); its
/// pooled test predictions are compared with the ensemble's by McNemar.
ExperimentReport run_experiment(const Corpus& corpus,
                                const ExperimentConfig& config,
                                const EnsembleObserver& observer = {});

struct AblationResult {
  VoteRule rule;
  std::vector<double> fold_test_accuracy;
  double mean_test_accuracy = 0.0;
};

/// Same folds and grids as run_experiment, but each grid is combined under
/// every rule in `rules`, so the rules are compared on identical members'
/// models and test halves. config.vote is ignored.
std::vector<AblationResult> run_ablation(const Corpus& corpus, const ExperimentConfig& config,
                                         std::span<const VoteRule> rules);

// Arithmetic mean and sample standard deviation of one spec across folds.
double fold_mean(const ExperimentReport& report, std::size_t spec_index);
double fold_std(const ExperimentReport& report, std::size_t spec_index);

}  // namespace wsd
