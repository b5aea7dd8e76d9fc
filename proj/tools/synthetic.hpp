#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wsd/corpus.hpp"

namespace wsd::synth {

/// A fixed context position that carries sense information. offset < 0 is
/// |offset| words to the left of the target, offset > 0 to the right. With
/// probability `reliability` the slot holds the cue word of the true sense,
/// otherwise the cue word of a uniformly drawn sense (possibly the true one).
struct CueSlot {
  int offset = -1;
  double reliability = 1.0;
};

/// Generator description. Every instance has exactly left_context words
/// before the target and right_context after it; positions without a cue are
/// filled with noise words, which carry no sense information.
struct SyntheticSpec {
  std::string target_word = "line";
  std::vector<std::pair<std::string, std::size_t>> sense_counts;
  std::size_t left_context = 60;
  std::size_t right_context = 60;
  std::vector<CueSlot> cues;

  // Noise words w1..wN drawn from a Zipf law with this exponent. With
  // cyclic_filler set, the noise is instead the repeating sequence f0..f9
  // at a per-instance offset, so every window of 10 or more words on a side
  // holds all ten filler words.
  std::size_t noise_vocabulary = 400;
  double zipf_exponent = 1.0;
  bool cyclic_filler = false;

  std::uint64_t seed = 1;
};

// Cue word of slot `slot` for sense index `sense`, e.g. "cue2b".
std::string cue_word(std::size_t slot, std::size_t sense);

/// Builds the corpus. Instances are ordered by generation; ids are
/// "<target><n>". Deterministic for a fixed spec.
Corpus generate(const SyntheticSpec& spec);

// Sense distributions of the two benchmark words.
std::vector<std::pair<std::string, std::size_t>> line_senses();
std::vector<std::pair<std::string, std::size_t>> interest_senses();

/// Ready-made fixtures.
///  line_like / interest_like: the benchmark sense distributions with
///    moderately informative cues near and far from the target.
///  separable: 3 senses x 100, the word directly left of the target names
///    the sense, cyclic filler elsewhere.
///  noisy: 3 senses x 600, half-reliable cues at mixed distances on both
///    sides, Zipf noise over 2000 words.
SyntheticSpec line_like(std::uint64_t seed);
SyntheticSpec interest_like(std::uint64_t seed);
SyntheticSpec separable(std::uint64_t seed);
SyntheticSpec noisy(std::uint64_t seed);

}  // namespace wsd::synth
