#include "wsd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <unordered_set>

#include "wsd/error.hpp"
#include "wsd/rng.hpp"

namespace wsd {

std::vector<std::size_t> FoldPlan::training_positions(std::size_t fold) const {
  std::vector<std::size_t> out;
  out.reserve(fold_of.size());
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan make_fold_plan(const Corpus& corpus, std::size_t k, std::uint64_t seed,
                        bool stratify_halves) {
  if (k < 2) throw InvalidArgument("fold count must be at least 2");
  const std::size_t n = corpus.size();
  if (n < 2 * k) {
    throw InvalidArgument("corpus of " + std::to_string(n) + " instances is too small for " +
                          std::to_string(k) + " folds (need " + std::to_string(2 * k) + ")");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng fold_rng(derive_seed(seed, kFoldStream));
  fold_rng.shuffle(std::span(order));

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.stratified_halves = stratify_halves;
  plan.fold_of.assign(n, 0);
  plan.devtest.resize(k);
  plan.test.resize(k);

  Rng half_rng(derive_seed(seed, kHalfSplitStream));
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t start = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    std::vector<std::size_t> fold(order.begin() + static_cast<std::ptrdiff_t>(start),
                                  order.begin() + static_cast<std::ptrdiff_t>(start + size));
    start += size;
    for (const auto p : fold) plan.fold_of[p] = f;

    half_rng.shuffle(std::span(fold));
    const std::size_t devtest_size = (size + 1) / 2;
    if (stratify_halves) {
      std::stable_sort(fold.begin(), fold.end(), [&](std::size_t a, std::size_t b) {
        return corpus.sense_index(corpus[a].sense) < corpus.sense_index(corpus[b].sense);
      });
      for (std::size_t i = 0; i < size; ++i) {
        (i % 2 == 0 ? plan.devtest[f] : plan.test[f]).push_back(fold[i]);
      }
    } else {
      plan.devtest[f].assign(fold.begin(), fold.begin() + static_cast<std::ptrdiff_t>(devtest_size));
      plan.test[f].assign(fold.begin() + static_cast<std::ptrdiff_t>(devtest_size), fold.end());
    }
    std::sort(plan.devtest[f].begin(), plan.devtest[f].end());
    std::sort(plan.test[f].begin(), plan.test[f].end());
  }
  return plan;
}

namespace {

template <typename T>
double accuracy_impl(std::span<const T> predicted, std::span<const T> gold) {
  if (predicted.size() != gold.size()) {
    throw InvalidArgument("prediction and gold sequences differ in length");
  }
  if (gold.empty()) throw InvalidArgument("accuracy of an empty sequence");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predicted[i] == gold[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

template <typename T>
McNemarResult mcnemar_impl(std::span<const T> a, std::span<const T> b,
                           std::span<const T> gold, McNemarMethod method) {
  if (a.size() != gold.size() || b.size() != gold.size()) {
    throw InvalidArgument("McNemar inputs differ in length");
  }
  std::size_t only_a = 0;
  std::size_t only_b = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool ra = a[i] == gold[i];
    const bool rb = b[i] == gold[i];
    if (ra && !rb) ++only_a;
    if (!ra && rb) ++only_b;
  }
  return mcnemar_from_counts(only_a, only_b, method);
}

}  // namespace

double accuracy(std::span<const std::string> predicted, std::span<const std::string> gold) {
  return accuracy_impl(predicted, gold);
}

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> gold) {
  return accuracy_impl(predicted, gold);
}

std::string_view to_string(McNemarMethod method) {
  return method == McNemarMethod::chi2 ? "chi2" : "exact";
}

McNemarMethod parse_mcnemar_method(std::string_view name) {
  if (name == "chi2") return McNemarMethod::chi2;
  if (name == "exact") return McNemarMethod::exact;
  throw InvalidArgument("unknown McNemar method '" + std::string(name) + "'");
}

McNemarResult mcnemar_from_counts(std::size_t only_a_correct, std::size_t only_b_correct,
                                  McNemarMethod method) {
  McNemarResult r;
  r.only_a_correct = only_a_correct;
  r.only_b_correct = only_b_correct;
  r.method = method;
  const std::size_t n = only_a_correct + only_b_correct;
  if (n == 0) return r;

  const double diff =
      std::fabs(static_cast<double>(only_a_correct) - static_cast<double>(only_b_correct)) - 1.0;
  r.statistic = diff * diff / static_cast<double>(n);

  if (method == McNemarMethod::chi2) {
    r.p_value = std::erfc(std::sqrt(r.statistic / 2.0));
    r.significant = r.statistic > kChiSquareCritical01;
  } else {
    // Two-sided exact binomial test with success probability 1/2.
    const std::size_t low = std::min(only_a_correct, only_b_correct);
    const double nd = static_cast<double>(n);
    double tail = 0.0;
    for (std::size_t i = 0; i <= low; ++i) {
      const double id = static_cast<double>(i);
      tail += std::exp(std::lgamma(nd + 1) - std::lgamma(id + 1) - std::lgamma(nd - id + 1) -
                       nd * std::log(2.0));
    }
    r.p_value = std::min(1.0, 2.0 * tail);
    r.significant = r.p_value < 0.01;
  }
  return r;
}

McNemarResult mcnemar(std::span<const std::string> predicted_a,
                      std::span<const std::string> predicted_b,
                      std::span<const std::string> gold, McNemarMethod method) {
  return mcnemar_impl(predicted_a, predicted_b, gold, method);
}

McNemarResult mcnemar(std::span<const std::size_t> predicted_a,
                      std::span<const std::size_t> predicted_b,
                      std::span<const std::size_t> gold, McNemarMethod method) {
  return mcnemar_impl(predicted_a, predicted_b, gold, method);
}

double fold_mean(const ExperimentReport& report, std::size_t spec_index) {
  double sum = 0.0;
  for (const auto& f : report.folds) sum += f.devtest_accuracy[spec_index];
  return sum / static_cast<double>(report.folds.size());
}

double fold_std(const ExperimentReport& report, std::size_t spec_index) {
  const std::size_t k = report.folds.size();
  if (k < 2) return 0.0;
  const double mean = fold_mean(report, spec_index);
  double ss = 0.0;
  for (const auto& f : report.folds) {
    const double d = f.devtest_accuracy[spec_index] - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(k - 1));
}

namespace {

void check_disjoint(const Corpus& a, const Corpus& b, const char* what) {
  std::unordered_set<std::string_view> ids;
  for (const auto& inst : a.instances()) ids.insert(inst.id);
  for (const auto& inst : b.instances()) {
    if (ids.contains(inst.id)) {
      throw ContaminationError("instance '" + inst.id + "' leaks into the " + what + " split");
    }
  }
}

std::vector<std::size_t> gold_indices(const Corpus& corpus) {
  std::vector<std::size_t> out;
  out.reserve(corpus.size());
  for (const auto& inst : corpus.instances()) out.push_back(corpus.sense_index(inst.sense));
  return out;
}

struct Round {
  std::size_t fold;
  const Corpus& devtest;
  const Corpus& test;
  const ClassifierGrid& grid;
};

// Trains one grid per fold and hands it over together with the splits.
template <typename Fn>
void for_each_round(const Corpus& corpus, const ExperimentConfig& config, Fn&& fn) {
  const FoldPlan plan = make_fold_plan(corpus, config.k, config.seed, config.stratify_halves);
  for (std::size_t f = 0; f < config.k; ++f) {
    const Corpus train = corpus.subset(plan.training_positions(f));
    const Corpus devtest = corpus.subset(plan.devtest[f]);
    const Corpus test = corpus.subset(plan.test[f]);
    check_disjoint(train, test, "test");
    check_disjoint(devtest, test, "test");
    const ClassifierGrid grid =
        train_grid(train, devtest, GridOptions{config.epsilon, config.scoring, config.threads});
    fn(Round{f, devtest, test, grid}, train.size());
  }
}

std::vector<std::size_t> ensemble_predictions(const Ensemble& ensemble, const Corpus& test) {
  std::vector<std::size_t> out;
  out.reserve(test.size());
  for (const auto& inst : test.instances()) out.push_back(ensemble.vote_index(inst));
  return out;
}

}  // namespace

ExperimentReport run_experiment(const Corpus& corpus, const ExperimentConfig& config,
                                const EnsembleObserver& observer) {
  const auto& specs = grid_specs();

  ExperimentReport report;
  report.config = config;
  report.target_word = corpus.target_word();
  report.senses.assign(corpus.senses().begin(), corpus.senses().end());
  report.instance_count = corpus.size();

  std::vector<std::size_t> pooled_gold;
  std::vector<std::size_t> pooled_ensemble;
  // pooled_single[spec] = test predictions of that spec across folds.
  std::vector<std::vector<std::size_t>> pooled_single(specs.size());

  for_each_round(corpus, config, [&](const Round& round, std::size_t train_size) {
    const Ensemble ensemble = select_members(round.grid, config.vote);
    if (observer) observer(round.fold, ensemble);

    FoldResult result;
    result.train_size = train_size;
    result.devtest_size = round.devtest.size();
    result.test_size = round.test.size();
    result.members.assign(ensemble.members().begin(), ensemble.members().end());

    const auto gold = gold_indices(round.test);
    std::vector<std::size_t> predicted = ensemble_predictions(ensemble, round.test);
    result.ensemble_test_accuracy = accuracy(predicted, gold);
    pooled_ensemble.insert(pooled_ensemble.end(), predicted.begin(), predicted.end());
    pooled_gold.insert(pooled_gold.end(), gold.begin(), gold.end());

    for (std::size_t i = 0; i < specs.size(); ++i) {
      const GridEntry& entry = round.grid.entries()[i];
      result.devtest_accuracy[i] = entry.devtest_accuracy;
      predicted.clear();
      for (const auto& inst : round.test.instances()) {
        predicted.push_back(entry.model->classify_index(inst));
      }
      result.test_accuracy[i] = accuracy(predicted, gold);
      pooled_single[i].insert(pooled_single[i].end(), predicted.begin(), predicted.end());
    }
    report.folds.push_back(std::move(result));
  });

  double ensemble_sum = 0.0;
  for (const auto& f : report.folds) ensemble_sum += f.ensemble_test_accuracy;
  report.ensemble_test_accuracy = ensemble_sum / static_cast<double>(config.k);

  std::size_t best = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    report.mean_devtest[i] = fold_mean(report, i);
    report.std_devtest[i] = fold_std(report, i);
    const auto key = [&](std::size_t j) {
      return std::tuple(-report.mean_devtest[j], specs[j].total(), specs[j].left(),
                        specs[j].right());
    };
    if (i > 0 && key(i) < key(best)) best = i;
  }
  report.best_single = specs[best];
  double single_sum = 0.0;
  for (const auto& f : report.folds) single_sum += f.test_accuracy[best];
  report.best_single_test_accuracy = single_sum / static_cast<double>(config.k);
  report.mcnemar = mcnemar(std::span<const std::size_t>(pooled_ensemble),
                           std::span<const std::size_t>(pooled_single[best]),
                           std::span<const std::size_t>(pooled_gold), config.mcnemar);
  return report;
}

std::vector<AblationResult> run_ablation(const Corpus& corpus, const ExperimentConfig& config,
                                         std::span<const VoteRule> rules) {
  std::vector<AblationResult> results;
  for (const auto& rule : rules) results.push_back(AblationResult{rule, {}, 0.0});
  for_each_round(corpus, config, [&](const Round& round, std::size_t) {
    const auto gold = gold_indices(round.test);
    for (auto& r : results) {
      const Ensemble ensemble = select_members(round.grid, r.rule);
      r.fold_test_accuracy.push_back(accuracy(ensemble_predictions(ensemble, round.test), gold));
    }
  });
  for (auto& r : results) {
    double sum = 0.0;
    for (const double a : r.fold_test_accuracy) sum += a;
    r.mean_test_accuracy = sum / static_cast<double>(r.fold_test_accuracy.size());
  }
  return results;
}

}  // namespace wsd
