// Model file layout (tab-separated, one item per line):
//
//   wsd-nb-model  <version>
//   spec          <left> <right>
//   epsilon       <e>
//   scoring       bernoulli|presence
//   senses        <S>
//   sense         <n(s)> <p(s)> <label>                      x S
//   vocabulary    <V>
//   word          <w> <n(w,s)>... <p(w|s)>...                 x V
//   checksum      <crc32 of every preceding byte, 8 hex digits>
//
// Reals are written with 17 significant digits so they read back bit-exact.

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "wsd/error.hpp"
#include "wsd/naive_bayes.hpp"

namespace wsd {
namespace {

constexpr std::string_view kMagic = "wsd-nb-model";

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint32_t crc_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string format_crc(std::uint32_t crc) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", crc);
  return buf;
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

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

class LineReader {
 public:
  explicit LineReader(std::vector<std::string_view> lines) : lines_(std::move(lines)) {}

  std::vector<std::string_view> next(std::string_view key, std::size_t min_fields) {
    if (pos_ >= lines_.size()) {
      throw TruncatedError("model file ends before '" + std::string(key) + "'");
    }
    auto fields = split_tabs(lines_[pos_++]);
    if (fields[0] != key) {
      throw FormatError("expected '" + std::string(key) + "', found '" +
                        std::string(fields[0]) + "'");
    }
    if (fields.size() < min_fields) {
      throw FormatError("too few fields on '" + std::string(key) + "' line");
    }
    return fields;
  }

  bool done() const { return pos_ == lines_.size(); }

 private:
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_model(const NaiveBayesModel& model, std::ostream& out) {
  std::ostringstream body;
  const std::size_t n_senses = model.sense_count();
  body << kMagic << '\t' << kModelFormatVersion << '\n';
  body << "spec\t" << model.spec().left() << '\t' << model.spec().right() << '\n';
  body << "epsilon\t" << format_real(model.epsilon()) << '\n';
  body << "scoring\t" << to_string(model.scoring()) << '\n';
  body << "senses\t" << n_senses << '\n';
  for (std::size_t s = 0; s < n_senses; ++s) {
    body << "sense\t" << model.training_count(s) << '\t'
         << format_real(model.prior(s)) << '\t' << model.senses()[s] << '\n';
  }
  body << "vocabulary\t" << model.vocabulary().size() << '\n';
  for (std::size_t w = 0; w < model.vocabulary().size(); ++w) {
    body << "word\t" << model.vocabulary()[w];
    for (std::size_t s = 0; s < n_senses; ++s) {
      body << '\t' << model.cooccurrence_count(w, s);
    }
    for (std::size_t s = 0; s < n_senses; ++s) {
      body << '\t' << format_real(model.conditional(w, s));
    }
    body << '\n';
  }
  const std::string text = body.str();
  out << text << "checksum\t" << format_crc(crc_of(text)) << '\n';
}

NaiveBayesModel load_model(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  if (text.empty()) throw TruncatedError("model file is empty");

  const std::string_view view(text);
  const auto first_end = view.find('\n');
  const auto header = split_tabs(view.substr(0, first_end));
  if (header[0] != kMagic || header.size() != 2) {
    throw FormatError("not a naive bayes model file");
  }
  int version = 0;
  {
    const auto [ptr, ec] = std::from_chars(
        header[1].data(), header[1].data() + header[1].size(), version);
    if (ec != std::errc{} || ptr != header[1].data() + header[1].size()) {
      throw VersionError("unreadable model format version '" +
                         std::string(header[1]) + "'");
    }
  }
  if (version != kModelFormatVersion) {
    throw VersionError("model format version " + std::to_string(version) +
                       " is not supported (expected " +
                       std::to_string(kModelFormatVersion) + ")");
  }

  if (view.back() != '\n') throw TruncatedError("model file is truncated");
  const auto last_start = view.rfind('\n', view.size() - 2);
  const auto body_end = last_start == std::string_view::npos ? 0 : last_start + 1;
  const auto last = split_tabs(view.substr(body_end, view.size() - 1 - body_end));
  if (last[0] != "checksum" || last.size() != 2 || last[1].size() != 8) {
    throw TruncatedError("model file is truncated (no checksum line)");
  }
  const auto body = view.substr(0, body_end);
  if (format_crc(crc_of(body)) != last[1]) {
    throw ChecksumError("model checksum mismatch");
  }

  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < body.size();) {
    const auto nl = body.find('\n', start);
    lines.push_back(body.substr(start, nl - start));
    start = nl + 1;
  }
  LineReader reader(std::move(lines));
  reader.next(kMagic, 2);

  const auto spec_f = reader.next("spec", 3);
  WindowSpec spec = [&] {
    try {
      return WindowSpec(parse_number<int>(spec_f[1], "window"),
                        parse_number<int>(spec_f[2], "window"));
    } catch (const InvalidArgument& e) {
      throw FormatError(e.what());
    }
  }();
  const double epsilon = parse_number<double>(reader.next("epsilon", 2)[1], "epsilon");
  const ScoringMode scoring = [&] {
    try {
      return parse_scoring_mode(reader.next("scoring", 2)[1]);
    } catch (const InvalidArgument& e) {
      throw FormatError(e.what());
    }
  }();

  const auto n_senses = parse_number<std::size_t>(reader.next("senses", 2)[1], "sense count");
  std::vector<std::string> senses;
  std::vector<std::size_t> sense_counts;
  std::vector<double> priors;
  for (std::size_t s = 0; s < n_senses; ++s) {
    const auto f = reader.next("sense", 4);
    sense_counts.push_back(parse_number<std::size_t>(f[1], "count"));
    priors.push_back(parse_number<double>(f[2], "prior"));
    senses.emplace_back(f[3]);
  }

  const auto n_words = parse_number<std::size_t>(reader.next("vocabulary", 2)[1], "vocabulary size");
  std::vector<std::string> vocabulary;
  std::vector<std::size_t> word_counts;
  std::vector<double> conditionals;
  vocabulary.reserve(n_words);
  for (std::size_t w = 0; w < n_words; ++w) {
    const auto f = reader.next("word", 2 + 2 * n_senses);
    if (f.size() != 2 + 2 * n_senses) throw FormatError("bad word row width");
    vocabulary.emplace_back(f[1]);
    for (std::size_t s = 0; s < n_senses; ++s) {
      word_counts.push_back(parse_number<std::size_t>(f[2 + s], "count"));
    }
    for (std::size_t s = 0; s < n_senses; ++s) {
      conditionals.push_back(parse_number<double>(f[2 + n_senses + s], "conditional"));
    }
  }
  if (!reader.done()) throw FormatError("trailing lines before checksum");

  return NaiveBayesModel::from_parameters(
      spec, epsilon, scoring, std::move(senses), std::move(sense_counts),
      std::move(priors), std::move(vocabulary), std::move(word_counts),
      std::move(conditionals));
}

void save_model_file(const NaiveBayesModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file '" + path + "'");
  save_model(model, out);
  if (!out.flush()) throw Error("failed writing model file '" + path + "'");
}

NaiveBayesModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open model file '" + path + "'");
  return load_model(in);
}

}  // namespace wsd
