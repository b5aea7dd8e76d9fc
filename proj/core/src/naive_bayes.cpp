#include "wsd/naive_bayes.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "wsd/error.hpp"

namespace wsd {

std::string_view to_string(ScoringMode mode) {
  return mode == ScoringMode::bernoulli ? "bernoulli" : "presence";
}

ScoringMode parse_scoring_mode(std::string_view name) {
  if (name == "bernoulli") return ScoringMode::bernoulli;
  if (name == "presence") return ScoringMode::presence;
  throw InvalidArgument("unknown scoring mode '" + std::string(name) + "'");
}

bool scores_tied(double a, double b) noexcept {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= 1e-9 * scale;
}

std::size_t argmax_with_ties(std::span<const double> scores,
                             std::span<const std::size_t> counts) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores_tied(scores[i], scores[best])) {
      if (counts[i] > counts[best]) best = i;
    } else if (scores[i] > scores[best]) {
      best = i;
    }
  }
  return best;
}

NaiveBayesModel NaiveBayesModel::train(const Corpus& corpus,
                                       const WindowSpec& spec, double epsilon,
                                       ScoringMode scoring) {
  if (corpus.empty()) throw TrainingError("cannot train on an empty corpus");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("epsilon must lie in (0, 1)");
  }
  const std::size_t n_senses = corpus.senses().size();

  NaiveBayesModel m(spec);
  m.epsilon_ = epsilon;
  m.scoring_ = scoring;
  m.instance_count_ = corpus.size();
  m.senses_.assign(corpus.senses().begin(), corpus.senses().end());
  m.sense_counts_.assign(n_senses, 0);

  // (word, sense) once per instance whose window holds the word; sorting
  // groups each word's occurrences into one run.
  std::vector<std::pair<std::string_view, std::size_t>> hits;
  std::vector<std::string_view> window;
  hits.reserve(corpus.size() * std::min<std::size_t>(spec.total(), 64));
  for (const auto& inst : corpus.instances()) {
    const std::size_t s = corpus.sense_index(inst.sense);
    ++m.sense_counts_[s];
    const auto& tokens = inst.tokens;
    const std::size_t target = inst.target_index;
    const auto left = static_cast<std::size_t>(spec.left());
    const std::size_t begin = target > left ? target - left : 0;
    const std::size_t end =
        std::min(tokens.size(), target + static_cast<std::size_t>(spec.right()) + 1);
    window.clear();
    for (std::size_t j = begin; j < end; ++j) {
      if (j != target) window.emplace_back(tokens[j]);
    }
    std::sort(window.begin(), window.end());
    window.erase(std::unique(window.begin(), window.end()), window.end());
    for (const auto w : window) hits.emplace_back(w, s);
  }
  std::sort(hits.begin(), hits.end());

  const auto total = static_cast<double>(corpus.size());
  m.priors_.resize(n_senses);
  bool floored = false;
  for (std::size_t s = 0; s < n_senses; ++s) {
    m.priors_[s] = static_cast<double>(m.sense_counts_[s]) / total;
    if (m.priors_[s] == 0.0) {
      m.priors_[s] = epsilon;
      floored = true;
    }
  }
  // Without a floor the priors already sum to one.
  if (floored) {
    double sum = 0.0;
    for (const double p : m.priors_) sum += p;
    for (double& p : m.priors_) p /= sum;
  }

  std::size_t distinct = 0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (i == 0 || hits[i].first != hits[i - 1].first) ++distinct;
  }
  m.vocabulary_.reserve(distinct);
  m.word_counts_.reserve(distinct * n_senses);
  for (std::size_t i = 0; i < hits.size();) {
    const std::string_view word = hits[i].first;
    m.vocabulary_.emplace_back(word);
    const std::size_t row = m.word_counts_.size();
    m.word_counts_.resize(row + n_senses, 0);
    for (; i < hits.size() && hits[i].first == word; ++i) {
      ++m.word_counts_[row + hits[i].second];
    }
  }
  m.conditionals_.reserve(m.word_counts_.size());
  for (std::size_t k = 0; k < m.word_counts_.size(); ++k) {
    const std::size_t n_s = m.sense_counts_[k % n_senses];
    double p = n_s == 0 ? 0.0
                        : static_cast<double>(m.word_counts_[k]) / static_cast<double>(n_s);
    if (p == 0.0) p = epsilon;
    if (p == 1.0) p = 1.0 - epsilon;
    m.conditionals_.push_back(p);
  }
  m.finalize();
  return m;
}

NaiveBayesModel NaiveBayesModel::from_parameters(
    WindowSpec spec, double epsilon, ScoringMode scoring,
    std::vector<std::string> senses, std::vector<std::size_t> sense_counts,
    std::vector<double> priors, std::vector<std::string> vocabulary,
    std::vector<std::size_t> word_counts, std::vector<double> conditionals) {
  const std::size_t n_senses = senses.size();
  if (n_senses == 0) throw FormatError("model has no senses");
  if (sense_counts.size() != n_senses || priors.size() != n_senses) {
    throw FormatError("sense table size mismatch");
  }
  if (word_counts.size() != vocabulary.size() * n_senses ||
      conditionals.size() != vocabulary.size() * n_senses) {
    throw FormatError("conditional table size mismatch");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw FormatError("bad epsilon");
  for (const double p : priors) {
    if (!(p > 0.0 && p <= 1.0)) throw FormatError("prior out of range");
  }
  for (const double p : conditionals) {
    if (!(p > 0.0 && p < 1.0)) throw FormatError("conditional out of range");
  }
  if (std::adjacent_find(vocabulary.begin(), vocabulary.end(),
                         std::greater_equal<>()) != vocabulary.end()) {
    throw FormatError("vocabulary not strictly sorted");
  }

  NaiveBayesModel m(spec);
  m.epsilon_ = epsilon;
  m.scoring_ = scoring;
  m.senses_ = std::move(senses);
  m.sense_counts_ = std::move(sense_counts);
  m.priors_ = std::move(priors);
  m.vocabulary_ = std::move(vocabulary);
  m.word_counts_ = std::move(word_counts);
  m.conditionals_ = std::move(conditionals);
  for (const auto c : m.sense_counts_) m.instance_count_ += c;
  m.finalize();
  return m;
}

void NaiveBayesModel::finalize() {
  std::size_t capacity = 2;
  while (capacity < 2 * vocabulary_.size()) capacity *= 2;
  slots_.assign(capacity, kEmptySlot);
  for (std::size_t w = 0; w < vocabulary_.size(); ++w) {
    std::size_t i = std::hash<std::string_view>{}(vocabulary_[w]) & (capacity - 1);
    while (slots_[i] != kEmptySlot) i = (i + 1) & (capacity - 1);
    slots_[i] = static_cast<std::uint32_t>(w);
  }

  const std::size_t n_senses = senses_.size();
  base_.assign(n_senses, 0.0);
  weights_.assign(conditionals_.size(), 0.0);
  for (std::size_t s = 0; s < n_senses; ++s) base_[s] = std::log(priors_[s]);
  for (std::size_t w = 0; w < vocabulary_.size(); ++w) {
    for (std::size_t s = 0; s < n_senses; ++s) {
      const double p = conditionals_[w * n_senses + s];
      if (scoring_ == ScoringMode::bernoulli) {
        const double absent = std::log1p(-p);
        base_[s] += absent;
        weights_[w * n_senses + s] = std::log(p) - absent;
      } else {
        weights_[w * n_senses + s] = std::log(p);
      }
    }
  }
}

std::optional<std::size_t> NaiveBayesModel::word_index(std::string_view word) const {
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t i = std::hash<std::string_view>{}(word) & mask;; i = (i + 1) & mask) {
    const std::uint32_t w = slots_[i];
    if (w == kEmptySlot) return std::nullopt;
    if (vocabulary_[w] == word) return w;
  }
}

std::optional<std::size_t> NaiveBayesModel::find_sense(std::string_view sense) const {
  const auto it = std::find(senses_.begin(), senses_.end(), sense);
  if (it == senses_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - senses_.begin());
}

void NaiveBayesModel::accumulate(const FeatureSet& features, double* scores) const {
  const std::size_t n_senses = senses_.size();
  std::copy(base_.begin(), base_.end(), scores);
  for (const auto& word : features) {
    const auto w = word_index(word);
    if (!w) continue;
    const double* row = weights_.data() + *w * n_senses;
    for (std::size_t s = 0; s < n_senses; ++s) scores[s] += row[s];
  }
}

std::vector<double> NaiveBayesModel::log_joints(const FeatureSet& features) const {
  std::vector<double> scores(senses_.size());
  accumulate(features, scores.data());
  return scores;
}

double NaiveBayesModel::log_joint(const FeatureSet& features,
                                  std::size_t sense) const {
  if (sense >= senses_.size()) {
    throw UnknownSenseError("#" + std::to_string(sense));
  }
  return log_joints(features)[sense];
}

double NaiveBayesModel::log_joint(const FeatureSet& features,
                                  std::string_view sense) const {
  const auto s = find_sense(sense);
  if (!s) throw UnknownSenseError(std::string(sense));
  return log_joints(features)[*s];
}

std::size_t NaiveBayesModel::classify_index(const FeatureSet& features) const {
  constexpr std::size_t kInline = 16;
  if (senses_.size() > kInline) return argmax_with_ties(log_joints(features), sense_counts_);
  std::array<double, kInline> scores;
  accumulate(features, scores.data());
  return argmax_with_ties(std::span(scores.data(), senses_.size()), sense_counts_);
}

std::size_t NaiveBayesModel::classify_index(const Instance& instance) const {
  return classify_index(extract(instance, spec_));
}

const std::string& NaiveBayesModel::classify(const Instance& instance) const {
  return senses_[classify_index(instance)];
}

bool operator==(const NaiveBayesModel& a, const NaiveBayesModel& b) {
  return a.spec_ == b.spec_ && a.epsilon_ == b.epsilon_ &&
         a.scoring_ == b.scoring_ && a.senses_ == b.senses_ &&
         a.sense_counts_ == b.sense_counts_ && a.priors_ == b.priors_ &&
         a.vocabulary_ == b.vocabulary_ && a.word_counts_ == b.word_counts_ &&
         a.conditionals_ == b.conditionals_;
}

}  // namespace wsd
