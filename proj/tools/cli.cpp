#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unistd.h>

#include "synthetic.hpp"
#include "wsd/corpus.hpp"
#include "wsd/ensemble.hpp"
#include "wsd/error.hpp"
#include "wsd/evaluation.hpp"
#include "wsd/report.hpp"

namespace wsd::cli {
namespace fs = std::filesystem;
namespace {


// Files are assembled in a sibling staging directory and moved into place
// only after everything succeeded, so a failed command leaves nothing behind.
class StagedOutput {
 public:
  explicit StagedOutput(fs::path target) : target_(std::move(target)) {
    auto parent = target_.parent_path();
    if (parent.empty()) parent = ".";
    staging_ = parent / (".wsd-staging-" + target_.filename().string() + "-" +
                         std::to_string(::getpid()));
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }
  ~StagedOutput() {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  const fs::path& dir() const { return staging_; }

  void commit() {
    fs::create_directories(target_);
    for (const auto& entry : fs::directory_iterator(staging_)) {
      const auto dest = target_ / entry.path().filename();
      fs::remove_all(dest);
      fs::rename(entry.path(), dest);
    }
  }

 private:
  fs::path target_;
  fs::path staging_;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!(out << text) || !out.flush()) throw Error("cannot write '" + path.string() + "'");
}

// Stages a single file next to `path` and renames it into place.
void write_file_atomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp-" + std::to_string(::getpid());
  try {
    write_file(tmp, text);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

std::string corpus_text(const Corpus& corpus) {
  std::ostringstream out;
  write_corpus(out, corpus);
  return out.str();
}

struct InspectArgs {
  std::string corpus;
  std::string format = "marked";
};

struct SampleArgs {
  std::string corpus;
  std::string format = "marked";
  std::size_t per_sense = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct RunArgs {
  std::string corpus;
  std::string format = "marked";
  std::size_t k = 5;
  std::uint64_t seed = 0;
  double epsilon = kDefaultEpsilon;
  std::string vote = "majority";
  std::optional<std::size_t> per_sense;
  std::string out;
  std::vector<std::string> reports{"text"};
  bool stratify_halves = false;
  std::string mcnemar = "chi2";
  std::string scoring = "bernoulli";
  unsigned threads = 0;
};

struct ClassifyArgs {
  std::string manifest;
  std::string corpus;
  std::string format = "marked";
};

void add_format(CLI::App& cmd, std::string& format) {
  cmd.add_option("--format", format, "Corpus format: marked or pretokenized")
      ->check(CLI::IsMember({"marked", "pretokenized"}))
      ->capture_default_str();
}

int cmd_inspect(const InspectArgs& a, std::ostream& out) {
  const Corpus corpus = read_corpus_file(a.corpus, parse_corpus_format(a.format), ParseOptions{true});
  std::size_t total = 0;
  out << "sense\tcount\n";
  for (const auto& [sense, count] : sense_distribution(corpus)) {
    out << sense << '\t' << count << '\n';
    total += count;
  }
  out << "total\t" << total << '\n';
  return 0;
}

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  const Corpus corpus = read_corpus_file(a.corpus, parse_corpus_format(a.format));
  const Corpus sample = uniform_subsample(corpus, a.per_sense, a.seed);
  write_file_atomically(a.out, corpus_text(sample));
  out << "wrote " << sample.size() << " instances (" << a.per_sense << " per sense) to "
      << a.out << '\n';
  return 0;
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  ExperimentConfig config;
  config.k = a.k;
  config.seed = a.seed;
  config.epsilon = a.epsilon;
  config.scoring = parse_scoring_mode(a.scoring);
  config.vote = VoteRule::parse(a.vote);
  config.stratify_halves = a.stratify_halves;
  config.mcnemar = parse_mcnemar_method(a.mcnemar);
  config.threads = a.threads;

  Corpus corpus = read_corpus_file(a.corpus, parse_corpus_format(a.format));
  if (a.per_sense) corpus = uniform_subsample(corpus, *a.per_sense, a.seed);

  StagedOutput staged(a.out);
  const ExperimentReport report =
      run_experiment(corpus, config, [&](std::size_t fold, const Ensemble& ensemble) {
        save_manifest(ensemble, (staged.dir() / ("fold-" + std::to_string(fold + 1))).string());
      });
  for (const auto& kind : a.reports) {
    if (kind == "text") write_file(staged.dir() / "report.txt", render_text_report(report));
    if (kind == "structured") write_file(staged.dir() / "report.json", render_json_report(report));
  }
  staged.commit();
  out << summary_line(report) << '\n';
  return 0;
}

int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  const Ensemble ensemble = load_manifest(a.manifest);
  const Corpus corpus = read_corpus_file(a.corpus, parse_corpus_format(a.format));
  std::size_t correct = 0;
  for (const auto& inst : corpus.instances()) {
    const auto& predicted = ensemble.vote(inst);
    if (predicted == inst.sense) ++correct;
    out << inst.id << '\t' << predicted << '\t' << inst.sense << '\n';
  }
  out << "# accuracy " << static_cast<double>(correct) / static_cast<double>(corpus.size())
      << " over " << corpus.size() << " instances\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Naive Bayes ensembles over left/right context windows for word sense "
               "disambiguation"};
  app.name("wsd");
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or INI file with option values; command-line flags "
                                 "take precedence (use a [run] section for run options)");

  InspectArgs inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print the sense distribution of a corpus");
  inspect_cmd->add_option("corpus", inspect.corpus, "Corpus file")->required();
  add_format(*inspect_cmd, inspect.format);

  SampleArgs sample;
  auto* sample_cmd =
      app.add_subcommand("sample", "Write a uniformly distributed subsample of a corpus");
  sample_cmd->add_option("corpus", sample.corpus, "Corpus file")->required();
  add_format(*sample_cmd, sample.format);
  sample_cmd->add_option("--per-sense", sample.per_sense, "Instances to keep per sense")
      ->required()
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample.seed, "Random seed")->required();
  sample_cmd->add_option("--out", sample.out, "Output corpus file (marked format)")->required();

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand(
      "run", "Cross-validate the 81-classifier grid and its ensemble, write reports");
  run_cmd->add_option("corpus", run_args.corpus, "Corpus file")->required();
  add_format(*run_cmd, run_args.format);
  run_cmd->add_option("--k", run_args.k, "Number of folds")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}));
  run_cmd->add_option("--seed", run_args.seed, "Random seed (required)")->required();
  run_cmd->add_option("--epsilon", run_args.epsilon, "Smoothing floor probability, in (0, 1)")
      ->capture_default_str()
      ->check([](const std::string& s) -> std::string {
        try {
          const double v = std::stod(s);
          return v > 0.0 && v < 1.0 ? "" : "epsilon must lie in (0, 1)";
        } catch (...) {
          return "epsilon must be a number";
        }
      });
  run_cmd->add_option("--vote", run_args.vote,
                      "Vote rule: majority, weighted, all81 or category=<L,R> with L and R "
                      "each narrow, medium or wide")
      ->capture_default_str()
      ->check([](const std::string& s) -> std::string {
        try {
          VoteRule::parse(s);
          return "";
        } catch (const std::exception& e) {
          return e.what();
        }
      });
  run_cmd->add_option("--per-sense", run_args.per_sense,
                      "Uniformly subsample this many instances per sense before running")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run_args.out, "Output directory")->required();
  run_cmd->add_option("--report", run_args.reports, "Report formats: text, structured")
      ->delimiter(',')
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  run_cmd->add_flag("--stratify-halves", run_args.stratify_halves,
                    "Split each held-out fold into devtest/test halves stratified by sense");
  run_cmd->add_option("--mcnemar", run_args.mcnemar, "McNemar test: chi2 or exact")
      ->check(CLI::IsMember({"chi2", "exact"}))
      ->capture_default_str();
  run_cmd->add_option("--scoring", run_args.scoring, "Feature scoring: bernoulli or presence")
      ->check(CLI::IsMember({"bernoulli", "presence"}))
      ->capture_default_str();
  run_cmd->add_option("--threads", run_args.threads,
                      "Worker threads for grid training (0 = all cores); output is identical "
                      "for any value")
      ->capture_default_str();

  ClassifyArgs classify;
  auto* classify_cmd = app.add_subcommand(
      "classify", "Apply a saved ensemble manifest to a corpus and print predictions");
  classify_cmd->add_option("manifest", classify.manifest, "Ensemble manifest file")->required();
  classify_cmd->add_option("corpus", classify.corpus, "Corpus file")->required();
  add_format(*classify_cmd, classify.format);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (inspect_cmd->parsed()) return cmd_inspect(inspect, out);
    if (sample_cmd->parsed()) return cmd_sample(sample, out);
    if (run_cmd->parsed()) return cmd_run(run_args, out);
    if (classify_cmd->parsed()) return cmd_classify(classify, out);
  } catch (const std::exception& e) {
    err << "wsd: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int run_synth(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Write synthetic sense-tagged corpora in the marked format"};
  app.name("wsd-synth");
  std::string kind;
  std::uint64_t seed = 1;
  std::string path;
  app.add_option("kind", kind, "line, interest, separable or noisy")
      ->required()
      ->check(CLI::IsMember({"line", "interest", "separable", "noisy"}));
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  app.add_option("--out", path, "Output file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    const synth::SyntheticSpec spec = kind == "line"       ? synth::line_like(seed)
                                      : kind == "interest" ? synth::interest_like(seed)
                                      : kind == "separable" ? synth::separable(seed)
                                                            : synth::noisy(seed);
    const Corpus corpus = synth::generate(spec);
    write_file_atomically(path, corpus_text(corpus));
    out << "wrote " << corpus.size() << " instances to " << path << '\n';
  } catch (const std::exception& e) {
    err << "wsd-synth: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace wsd::cli
