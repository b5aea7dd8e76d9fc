#include "wsd/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "wsd/error.hpp"
#include "wsd/rng.hpp"

namespace wsd {
namespace {

constexpr std::string_view kMarker = "@@";

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

bool is_normalized_token(std::string_view t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), is_token_char);
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = s.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, tab - start));
    start = tab + 1;
  }
}

std::size_t count_markers(std::string_view token) {
  std::size_t n = 0;
  for (auto pos = token.find(kMarker); pos != std::string_view::npos;
       pos = token.find(kMarker, pos + kMarker.size())) {
    ++n;
  }
  return n;
}

struct Record {
  std::string id;
  std::string sense;
  std::vector<std::string> tokens;
  std::size_t target_index = 0;
};

Record parse_marked(const std::vector<std::string_view>& fields,
                    std::size_t line_no) {
  if (fields.size() != 3) {
    throw ParseError(line_no, "expected 3 tab-separated fields (id, sense, "
                              "text), got " + std::to_string(fields.size()));
  }
  Record rec{std::string(fields[0]), std::string(fields[1]), {}, 0};
  bool found = false;
  for (const auto raw : split_whitespace(fields[2])) {
    const auto markers = count_markers(raw);
    if (markers == 0) {
      auto tok = normalize_token(raw);
      if (!tok.empty()) rec.tokens.push_back(std::move(tok));
      continue;
    }
    if (markers != 2) {
      throw ParseError(line_no, "unterminated target marker in '" +
                                    std::string(raw) + "'");
    }
    if (found) throw ParseError(line_no, "more than one target marker");
    auto tok = normalize_token(raw);
    if (tok.empty()) {
      throw ParseError(line_no, "target token '" + std::string(raw) +
                                    "' is empty after normalization");
    }
    found = true;
    rec.target_index = rec.tokens.size();
    rec.tokens.push_back(std::move(tok));
  }
  if (!found) throw ParseError(line_no, "missing @@target@@ marker");
  return rec;
}

Record parse_pretokenized(const std::vector<std::string_view>& fields,
                          std::size_t line_no) {
  if (fields.size() != 4) {
    throw ParseError(line_no, "expected 4 tab-separated fields (id, sense, "
                              "tokens, target index), got " +
                                  std::to_string(fields.size()));
  }
  Record rec{std::string(fields[0]), std::string(fields[1]), {}, 0};
  for (const auto raw : split_whitespace(fields[2])) {
    if (!is_normalized_token(raw)) {
      throw ParseError(line_no,
                       "token '" + std::string(raw) + "' is not normalized");
    }
    rec.tokens.emplace_back(raw);
  }
  const auto idx = fields[3];
  const auto [ptr, ec] =
      std::from_chars(idx.data(), idx.data() + idx.size(), rec.target_index);
  if (ec != std::errc{} || ptr != idx.data() + idx.size()) {
    throw ParseError(line_no, "bad target index '" + std::string(idx) + "'");
  }
  if (rec.tokens.empty()) throw ParseError(line_no, "no tokens");
  if (rec.target_index >= rec.tokens.size()) {
    throw ParseError(line_no, "target index " + std::to_string(rec.target_index) +
                                  " out of range for " +
                                  std::to_string(rec.tokens.size()) + " tokens");
  }
  return rec;
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "marked") return CorpusFormat::marked;
  if (name == "pretokenized") return CorpusFormat::pretokenized;
  throw InvalidArgument("unknown corpus format '" + std::string(name) + "'");
}

std::string_view to_string(CorpusFormat format) {
  return format == CorpusFormat::marked ? "marked" : "pretokenized";
}

Corpus::Corpus(std::string target_word, std::vector<std::string> senses,
               std::vector<Instance> instances)
    : target_word_(std::move(target_word)),
      senses_(std::move(senses)),
      instances_(std::move(instances)) {
  for (std::size_t i = 0; i < senses_.size(); ++i) {
    if (senses_[i].empty()) throw InvalidArgument("empty sense label");
    if (std::find(senses_.begin(), senses_.begin() + static_cast<std::ptrdiff_t>(i),
                  senses_[i]) != senses_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw InvalidArgument("sense '" + senses_[i] +
                            "' listed twice in the inventory");
    }
  }
  std::vector<std::string_view> ids;
  ids.reserve(instances_.size());
  for (const auto& inst : instances_) {
    if (inst.id.empty()) throw InvalidArgument("empty instance id");
    ids.emplace_back(inst.id);
    if (!find_sense(inst.sense)) {
      throw UnknownSenseError(inst.sense);
    }
    if (inst.tokens.empty()) {
      throw InvalidArgument("instance '" + inst.id + "' has no tokens");
    }
    if (inst.target_index >= inst.tokens.size()) {
      throw InvalidArgument("instance '" + inst.id +
                            "' target index out of range");
    }
    for (const auto& t : inst.tokens) {
      if (!is_normalized_token(t)) {
        throw InvalidArgument("instance '" + inst.id + "' token '" + t +
                              "' is not normalized");
      }
    }
  }
  std::sort(ids.begin(), ids.end());
  if (const auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end()) {
    throw DuplicateIdError(std::string(*dup));
  }
}

// Inventories are a handful of labels; a scan beats hashing.
std::optional<std::size_t> Corpus::find_sense(std::string_view sense) const {
  const auto it = std::find(senses_.begin(), senses_.end(), sense);
  if (it == senses_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - senses_.begin());
}

std::size_t Corpus::sense_index(std::string_view sense) const {
  if (auto idx = find_sense(sense)) return *idx;
  throw UnknownSenseError(std::string(sense));
}

Corpus Corpus::subset(std::span<const std::size_t> positions) const {
  std::vector<Instance> picked;
  picked.reserve(positions.size());
  for (const auto p : positions) picked.push_back(instances_.at(p));
  return Corpus(target_word_, senses_, std::move(picked));
}

std::string normalize_token(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (const char c : raw) {
    const char lower = (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    if (is_token_char(lower)) out.push_back(lower);
  }
  return out;
}

std::vector<std::string> normalize(std::string_view raw) {
  std::vector<std::string> out;
  for (const auto piece : split_whitespace(raw)) {
    auto tok = normalize_token(piece);
    if (!tok.empty()) out.push_back(std::move(tok));
  }
  return out;
}

Corpus parse_corpus(std::istream& in, CorpusFormat format,
                    ParseOptions options) {
  std::optional<std::vector<std::string>> declared_senses;
  std::string target_word;
  std::vector<std::string> senses;
  std::unordered_map<std::string, std::size_t> sense_seen;
  std::unordered_set<std::string> ids;
  std::vector<Instance> instances;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    if (view.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (view.front() == '#') {
      const auto fields = split_tabs(view);
      if (fields[0] == "#senses") {
        if (declared_senses) throw ParseError(line_no, "repeated #senses");
        if (!instances.empty()) {
          throw ParseError(line_no, "#senses must precede all records");
        }
        declared_senses.emplace();
        for (std::size_t i = 1; i < fields.size(); ++i) {
          if (fields[i].empty()) throw ParseError(line_no, "empty sense label");
          if (std::find(declared_senses->begin(), declared_senses->end(),
                        fields[i]) != declared_senses->end()) {
            throw ParseError(line_no, "sense '" + std::string(fields[i]) +
                                          "' declared twice");
          }
          declared_senses->emplace_back(fields[i]);
        }
      } else if (fields[0] == "#target" && fields.size() == 2) {
        target_word = normalize_token(fields[1]);
      }
      continue;
    }

    const auto fields = split_tabs(view);
    Record rec = format == CorpusFormat::marked
                     ? parse_marked(fields, line_no)
                     : parse_pretokenized(fields, line_no);
    if (rec.id.empty()) throw ParseError(line_no, "empty id");
    if (rec.sense.empty()) throw ParseError(line_no, "empty sense");
    if (!ids.insert(rec.id).second) throw DuplicateIdError(rec.id);

    if (declared_senses) {
      if (std::find(declared_senses->begin(), declared_senses->end(),
                    rec.sense) == declared_senses->end()) {
        throw ParseError(line_no, "sense '" + rec.sense +
                                      "' not in the #senses inventory");
      }
    } else if (!sense_seen.contains(rec.sense)) {
      sense_seen.emplace(rec.sense, senses.size());
      senses.push_back(rec.sense);
    }
    if (target_word.empty()) target_word = rec.tokens[rec.target_index];
    instances.push_back(Instance{std::move(rec.id), std::move(rec.sense),
                                 std::move(rec.tokens), rec.target_index});
  }
  if (instances.empty() && !options.allow_empty) {
    throw EmptyCorpusError("corpus has no records");
  }
  return Corpus(std::move(target_word),
                declared_senses ? std::move(*declared_senses) : std::move(senses),
                std::move(instances));
}

Corpus read_corpus_file(const std::string& path, CorpusFormat format,
                        ParseOptions options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  return parse_corpus(in, format, options);
}

void write_corpus(std::ostream& out, const Corpus& corpus,
                  CorpusFormat format) {
  if (!corpus.target_word().empty()) {
    out << "#target\t" << corpus.target_word() << '\n';
  }
  out << "#senses";
  for (const auto& s : corpus.senses()) out << '\t' << s;
  out << '\n';
  for (const auto& inst : corpus.instances()) {
    out << inst.id << '\t' << inst.sense << '\t';
    for (std::size_t i = 0; i < inst.tokens.size(); ++i) {
      if (i) out << ' ';
      if (format == CorpusFormat::marked && i == inst.target_index) {
        out << kMarker << inst.tokens[i] << kMarker;
      } else {
        out << inst.tokens[i];
      }
    }
    if (format == CorpusFormat::pretokenized) out << '\t' << inst.target_index;
    out << '\n';
  }
}

Corpus uniform_subsample(const Corpus& corpus, std::size_t per_sense,
                         std::uint64_t seed) {
  if (per_sense == 0) throw InvalidArgument("per-sense count must be positive");
  const auto senses = corpus.senses();
  std::vector<std::vector<std::size_t>> by_sense(senses.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_sense[corpus.sense_index(corpus[i].sense)].push_back(i);
  }
  for (std::size_t s = 0; s < senses.size(); ++s) {
    if (by_sense[s].size() < per_sense) {
      throw InsufficientDataError(senses[s], by_sense[s].size(), per_sense);
    }
  }
  Rng rng(derive_seed(seed, kSubsampleStream));
  std::vector<std::size_t> picked;
  picked.reserve(per_sense * senses.size());
  for (auto& positions : by_sense) {
    rng.shuffle(std::span(positions));
    picked.insert(picked.end(), positions.begin(), positions.begin() + per_sense);
  }
  rng.shuffle(std::span(picked));
  return corpus.subset(picked);
}

std::vector<std::pair<std::string, std::size_t>> sense_distribution(
    const Corpus& corpus) {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& s : corpus.senses()) out.emplace_back(s, 0);
  for (const auto& inst : corpus.instances()) {
    ++out[corpus.sense_index(inst.sense)].second;
  }
  return out;
}

}  // namespace wsd
