#include "synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "wsd/error.hpp"
#include "wsd/rng.hpp"

namespace wsd::synth {
namespace {

double uniform01(Rng& rng) {
  return static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

std::string sense_letter(std::size_t sense) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + sense % 26));
    sense /= 26;
  } while (sense > 0);
  return s;
}

}  // namespace

std::string cue_word(std::size_t slot, std::size_t sense) {
  return "cue" + std::to_string(slot) + sense_letter(sense);
}

Corpus generate(const SyntheticSpec& spec) {
  if (spec.sense_counts.empty()) throw InvalidArgument("no senses to generate");
  const std::size_t n_senses = spec.sense_counts.size();
  for (const auto& cue : spec.cues) {
    const auto reach = static_cast<std::size_t>(std::abs(cue.offset));
    if (cue.offset == 0 || reach > (cue.offset < 0 ? spec.left_context : spec.right_context)) {
      throw InvalidArgument("cue offset " + std::to_string(cue.offset) + " outside the context");
    }
  }

  std::vector<double> zipf_cdf(spec.noise_vocabulary);
  {
    double acc = 0.0;
    for (std::size_t r = 0; r < spec.noise_vocabulary; ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_exponent);
      zipf_cdf[r] = acc;
    }
    for (double& c : zipf_cdf) c /= acc;
  }

  // Interleave senses so a prefix of the corpus already mixes them.
  std::vector<std::size_t> labels;
  {
    std::vector<std::size_t> remaining;
    for (const auto& [name, count] : spec.sense_counts) remaining.push_back(count);
    for (bool any = true; any;) {
      any = false;
      for (std::size_t s = 0; s < n_senses; ++s) {
        if (remaining[s] > 0) {
          labels.push_back(s);
          --remaining[s];
          any = true;
        }
      }
    }
  }

  Rng rng(derive_seed(spec.seed, 100));
  std::vector<std::string> senses;
  for (const auto& [name, count] : spec.sense_counts) senses.push_back(name);
  std::vector<std::size_t> per_sense_seen(n_senses, 0);

  std::vector<Instance> instances;
  instances.reserve(labels.size());
  const std::size_t length = spec.left_context + 1 + spec.right_context;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t sense = labels[i];
    std::vector<std::string> tokens(length);
    const std::size_t target = spec.left_context;
    const std::size_t cycle = per_sense_seen[sense]++ % 10;
    for (std::size_t j = 0; j < length; ++j) {
      if (j == target) {
        tokens[j] = spec.target_word;
      } else if (spec.cyclic_filler) {
        tokens[j] = "f" + std::to_string((j + cycle) % 10);
      } else {
        const double u = uniform01(rng);
        const auto it = std::lower_bound(zipf_cdf.begin(), zipf_cdf.end(), u);
        const auto rank = std::min<std::size_t>(
            static_cast<std::size_t>(it - zipf_cdf.begin()), spec.noise_vocabulary - 1);
        tokens[j] = "w" + std::to_string(rank + 1);
      }
    }
    for (std::size_t c = 0; c < spec.cues.size(); ++c) {
      const auto& cue = spec.cues[c];
      const std::size_t observed =
          uniform01(rng) < cue.reliability ? sense : static_cast<std::size_t>(rng.below(n_senses));
      const auto pos = static_cast<std::size_t>(static_cast<long>(target) + cue.offset);
      tokens[pos] = cue_word(c, observed);
    }
    instances.push_back(Instance{spec.target_word + std::to_string(i + 1), senses[sense],
                                 std::move(tokens), target});
  }
  return Corpus(spec.target_word, std::move(senses), std::move(instances));
}

std::vector<std::pair<std::string, std::size_t>> line_senses() {
  return {{"product", 2218}, {"text", 405},     {"phone", 429},
          {"queue", 349},    {"division", 376}, {"cord", 371}};
}

std::vector<std::pair<std::string, std::size_t>> interest_senses() {
  return {{"money", 1252},    {"share", 500},   {"attention", 361},
          {"advantage", 178}, {"activity", 66}, {"cause", 11}};
}

SyntheticSpec line_like(std::uint64_t seed) {
  SyntheticSpec s;
  s.target_word = "line";
  s.sense_counts = line_senses();
  s.left_context = 30;
  s.right_context = 30;
  s.cues = {{-1, 0.5}, {2, 0.4}, {-4, 0.4}, {3, 0.3}, {-12, 0.4}, {20, 0.4}};
  s.seed = seed;
  return s;
}

SyntheticSpec interest_like(std::uint64_t seed) {
  SyntheticSpec s = line_like(seed);
  s.target_word = "interest";
  s.sense_counts = interest_senses();
  return s;
}

SyntheticSpec separable(std::uint64_t seed) {
  SyntheticSpec s;
  s.target_word = "bank";
  s.sense_counts = {{"river", 100}, {"money", 100}, {"turn", 100}};
  s.left_context = 60;
  s.right_context = 60;
  s.cues = {{-1, 1.0}};
  s.cyclic_filler = true;
  s.seed = seed;
  return s;
}

SyntheticSpec noisy(std::uint64_t seed) {
  SyntheticSpec s;
  s.target_word = "plant";
  s.sense_counts = {{"factory", 600}, {"flora", 600}, {"spy", 600}};
  s.left_context = 60;
  s.right_context = 60;
  // Half-reliable cues, two per range on each side. The noise vocabulary is
  // large enough that wide windows pay for the extra rare words they see.
  s.cues = {{-1, 0.5}, {2, 0.5},   {-4, 0.5},  {3, 0.5},
            {-15, 0.5}, {20, 0.5}, {-40, 0.5}, {45, 0.5}};
  s.noise_vocabulary = 2000;
  s.zipf_exponent = 1.0;
  s.seed = seed;
  return s;
}

}  // namespace wsd::synth
