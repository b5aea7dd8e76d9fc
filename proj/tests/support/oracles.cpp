#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

namespace wsd::testing {

std::string reference_normalize_token(std::string_view raw) {
  std::string out;
  for (const unsigned char c : raw) {
    if (c >= 0x80) continue;
    const int lower = std::tolower(c);
    if (std::isalnum(lower)) out.push_back(static_cast<char>(lower));
  }
  return out;
}

std::set<std::string> window_oracle(const std::vector<std::string>& tokens, std::size_t target,
                                    int left, int right) {
  std::set<std::string> out;
  for (std::size_t j = 0; j < tokens.size(); ++j) {
    const long d = static_cast<long>(j) - static_cast<long>(target);
    if ((d < 0 && -d <= left) || (d > 0 && d <= right)) out.insert(tokens[j]);
  }
  return out;
}

OracleModel oracle_train(const Corpus& corpus, int left, int right, double epsilon) {
  OracleModel m;
  m.senses.assign(corpus.senses().begin(), corpus.senses().end());
  const std::size_t S = m.senses.size();
  m.sense_counts.assign(S, 0);
  m.total = corpus.size();
  for (const auto& inst : corpus.instances()) {
    const auto s = static_cast<std::size_t>(
        std::find(m.senses.begin(), m.senses.end(), inst.sense) - m.senses.begin());
    ++m.sense_counts[s];
    for (const auto& w : window_oracle(inst.tokens, inst.target_index, left, right)) {
      auto& row = m.word_counts[w];
      row.resize(S, 0);
      ++row[s];
    }
  }
  for (std::size_t s = 0; s < S; ++s) {
    m.raw_prior.push_back(static_cast<double>(m.sense_counts[s]) / static_cast<double>(m.total));
  }
  m.prior = m.raw_prior;
  if (std::find(m.prior.begin(), m.prior.end(), 0.0) != m.prior.end()) {
    for (auto& p : m.prior) {
      if (p == 0.0) p = epsilon;
    }
    double sum = 0.0;
    for (const double p : m.prior) sum += p;
    for (auto& p : m.prior) p /= sum;
  }
  for (const auto& [w, row] : m.word_counts) {
    auto& raw = m.raw_cond[w];
    auto& smooth = m.cond[w];
    for (std::size_t s = 0; s < S; ++s) {
      const double r = m.sense_counts[s] ? static_cast<double>(row[s]) /
                                               static_cast<double>(m.sense_counts[s])
                                         : 0.0;
      raw.push_back(r);
      smooth.push_back(r == 0.0 ? epsilon : r == 1.0 ? 1.0 - epsilon : r);
    }
  }
  return m;
}

double oracle_log_joint(const OracleModel& model, const std::set<std::string>& features,
                        std::size_t sense) {
  double total = std::log(model.prior[sense]);
  for (const auto& [w, row] : model.cond) {
    total += features.count(w) ? std::log(row[sense]) : std::log(1.0 - row[sense]);
  }
  return total;
}

std::size_t oracle_classify(const OracleModel& model, const std::set<std::string>& features) {
  std::size_t best = 0;
  double best_score = oracle_log_joint(model, features, 0);
  for (std::size_t s = 1; s < model.senses.size(); ++s) {
    const double score = oracle_log_joint(model, features, s);
    const double scale = std::max({1.0, std::fabs(score), std::fabs(best_score)});
    if (std::fabs(score - best_score) <= 1e-9 * scale) {
      if (model.sense_counts[s] > model.sense_counts[best]) {
        best = s;
        best_score = score;
      }
    } else if (score > best_score) {
      best = s;
      best_score = score;
    }
  }
  return best;
}

std::size_t majority_baseline(const Corpus& corpus) {
  std::vector<std::size_t> counts(corpus.senses().size(), 0);
  for (const auto& inst : corpus.instances()) {
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (corpus.senses()[s] == inst.sense) ++counts[s];
    }
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < counts.size(); ++s) {
    if (counts[s] > counts[best]) best = s;
  }
  return best;
}

double mcnemar_oracle(long b, long c) {
  if (b + c == 0) return 0.0;
  const double d = std::abs(b - c) - 1.0;
  return d * d / static_cast<double>(b + c);
}

double bayes_optimal_accuracy(const synth::SyntheticSpec& spec) {
  const std::size_t S = spec.sense_counts.size();
  double n = 0;
  for (const auto& [name, count] : spec.sense_counts) n += static_cast<double>(count);
  std::vector<double> prior;
  for (const auto& [name, count] : spec.sense_counts) prior.push_back(static_cast<double>(count) / n);

  const std::size_t slots = spec.cues.size();
  std::vector<std::size_t> obs(slots, 0);
  double correct = 0.0;
  // Odometer over S^slots observation patterns.
  for (;;) {
    double best = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      double p = prior[s];
      for (std::size_t j = 0; j < slots; ++j) {
        const double q = spec.cues[j].reliability;
        p *= (obs[j] == s ? q : 0.0) + (1.0 - q) / static_cast<double>(S);
      }
      best = std::max(best, p);
    }
    correct += best;
    std::size_t j = 0;
    while (j < slots && ++obs[j] == S) obs[j++] = 0;
    if (j == slots) break;
  }
  return correct;
}

Corpus random_corpus(std::mt19937_64& rng, const RandomCorpusOptions& o) {
  std::vector<std::string> senses;
  for (std::size_t s = 0; s < o.senses; ++s) senses.push_back("s" + std::to_string(s));
  std::uniform_int_distribution<std::size_t> len(o.min_length, o.max_length);
  std::uniform_int_distribution<std::size_t> word(0, o.vocabulary - 1);
  std::uniform_int_distribution<std::size_t> sense(0, o.senses - 1);
  std::vector<Instance> instances;
  for (std::size_t i = 0; i < o.instances; ++i) {
    Instance inst;
    inst.id = "i" + std::to_string(i);
    inst.sense = senses[i < o.senses ? i : sense(rng)];
    const std::size_t n = len(rng);
    for (std::size_t t = 0; t < n; ++t) inst.tokens.push_back("v" + std::to_string(word(rng)));
    inst.target_index = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    inst.tokens[inst.target_index] = "target";
    instances.push_back(std::move(inst));
  }
  std::shuffle(instances.begin(), instances.end(), rng);
  return Corpus("target", senses, std::move(instances));
}

}  // namespace wsd::testing
