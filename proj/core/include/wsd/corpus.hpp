#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsd {

// One sense-tagged occurrence of the target word. tokens are normalized and
// tokens[target_index] is the occurrence itself.
struct Instance {
  std::string id;
  std::string sense;
  std::vector<std::string> tokens;
  std::size_t target_index = 0;

  friend bool operator==(const Instance&, const Instance&) = default;
};

enum class CorpusFormat {
  marked,        // id TAB sense TAB raw text with the target as @@token@@
  pretokenized,  // id TAB sense TAB normalized tokens TAB target index
};

CorpusFormat parse_corpus_format(std::string_view name);
std::string_view to_string(CorpusFormat format);

/// An immutable collection of instances for one target word.
///
/// The sense inventory is ordered; that order is fixed at construction and is
/// the final tie-breaker everywhere a deterministic choice between senses is
/// needed. The constructor checks every invariant (non-empty tokens, target
/// index in range, known senses, unique ids) and throws on violation.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::string target_word, std::vector<std::string> senses,
         std::vector<Instance> instances);

  const std::string& target_word() const noexcept { return target_word_; }
  std::span<const std::string> senses() const noexcept { return senses_; }
  std::span<const Instance> instances() const noexcept { return instances_; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }
  const Instance& operator[](std::size_t i) const { return instances_[i]; }

  std::optional<std::size_t> find_sense(std::string_view sense) const;
  // Throws UnknownSenseError.
  std::size_t sense_index(std::string_view sense) const;

  // Same target word and inventory, instances picked by position.
  Corpus subset(std::span<const std::size_t> positions) const;

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.target_word_ == b.target_word_ && a.senses_ == b.senses_ &&
           a.instances_ == b.instances_;
  }

 private:
  std::string target_word_;
  std::vector<std::string> senses_;
  std::vector<Instance> instances_;
};

/// Whitespace split, then every byte outside [a-z0-9] (after ASCII
/// lowercasing) is removed. Tokens left empty are dropped.
std::vector<std::string> normalize(std::string_view raw);

// Normalizes a single whitespace-free token; may return "".
std::string normalize_token(std::string_view raw);

/// Reads a corpus in the given format.
///
/// Blank lines and lines starting with '#' are skipped. Two comment
/// directives are honoured, both tab-separated: "#senses<TAB>s1<TAB>s2..."
/// fixes the sense inventory (records may then only use those senses) and
/// "#target<TAB>word" names the target word. Without them the inventory is
/// the senses in order of first appearance and the target word is the first
/// record's target token.
///
/// Throws ParseError (with line number), EmptyCorpusError when no records
/// are present (unless allow_empty), DuplicateIdError.
struct ParseOptions {
  bool allow_empty = false;
};
Corpus parse_corpus(std::istream& in, CorpusFormat format,
                    ParseOptions options = {});
// Throws Error when the file cannot be opened.
Corpus read_corpus_file(const std::string& path, CorpusFormat format,
                        ParseOptions options = {});

// Writes the directives above followed by one record per instance.
void write_corpus(std::ostream& out, const Corpus& corpus,
                  CorpusFormat format = CorpusFormat::marked);

/// Draws exactly per_sense instances of every inventory sense without
/// replacement, then shuffles the result. Deterministic for a fixed seed.
/// Throws InsufficientDataError naming the first short sense.
Corpus uniform_subsample(const Corpus& corpus, std::size_t per_sense,
                         std::uint64_t seed);

// Counts per sense, in inventory order; zero-count senses are included.
std::vector<std::pair<std::string, std::size_t>> sense_distribution(
    const Corpus& corpus);

}  // namespace wsd
