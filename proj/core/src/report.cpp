#include "wsd/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace wsd {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Rows: right window from 50 down to 0. Columns: left window 0..50.
std::string render_grid(const SpecGrid& values, const std::array<bool, 81>& marked) {
  constexpr const char* kRule =
      "              +----------------------+----------------------+----------------------+\n";
  std::ostringstream out;
  const std::size_t n = kWindowSizes.size();
  for (std::size_t row = n; row-- > 0;) {
    if (row % 3 == 2) out << kRule;
    const int right = kWindowSizes[row];
    const std::string_view label =
        row % 3 == 1 ? to_string(static_cast<Range>(row / 3)) : std::string_view("");
    char head[32];
    std::snprintf(head, sizeof head, "%-8.*s %3d  ", static_cast<int>(label.size()),
                  label.data(), right);
    out << head;
    for (std::size_t col = 0; col < n; ++col) {
      if (col % 3 == 0) out << '|';
      const std::size_t idx = col * n + row;
      out << ' ' << fixed(values[idx], 3) << (marked[idx] ? '*' : ' ');
    }
    out << "|\n";
  }
  out << kRule;
  out << std::string(14, ' ');
  for (std::size_t col = 0; col < n; ++col) {
    char cell[16];
    std::snprintf(cell, sizeof cell, " %5d ", kWindowSizes[col]);
    out << (col % 3 == 0 ? " " : "") << cell;
  }
  out << '\n' << std::string(14, ' ');
  for (std::size_t block = 0; block < 3; ++block) {
    const auto name = to_string(static_cast<Range>(block));
    const std::size_t pad = (22 - name.size()) / 2;
    out << std::string(pad, ' ') << name << std::string(22 - pad - name.size(), ' ');
  }
  out << '\n';
  return out.str();
}

std::array<bool, 81> member_marks(const std::vector<Member>& members) {
  std::array<bool, 81> marks{};
  for (const auto& m : members) marks[m.spec.grid_index()] = true;
  return marks;
}

}  // namespace

std::string summary_line(const ExperimentReport& report) {
  return "ensemble=" + fixed(report.ensemble_test_accuracy, 3) +
         " best_single=" + fixed(report.best_single_test_accuracy, 3) +
         " mcnemar=" + fixed(report.mcnemar.statistic, 3) +
         " significant=" + (report.mcnemar.significant ? "true" : "false");
}

std::string render_text_report(const ExperimentReport& report) {
  const auto& c = report.config;
  std::ostringstream out;
  out << "target word: " << report.target_word << "\n";
  out << "instances:   " << report.instance_count << "\n";
  out << "senses:      ";
  for (std::size_t i = 0; i < report.senses.size(); ++i) {
    out << (i ? ", " : "") << report.senses[i];
  }
  out << "\n";
  out << "config:      k=" << c.k << " seed=" << c.seed << " epsilon=" << c.epsilon
      << " vote=" << to_string(c.vote) << " scoring=" << to_string(c.scoring)
      << " halves=" << (c.stratify_halves ? "stratified" : "random")
      << " mcnemar=" << to_string(c.mcnemar) << "\n\n";

  std::array<bool, 81> any_fold{};
  for (const auto& f : report.folds) {
    const auto marks = member_marks(f.members);
    for (std::size_t i = 0; i < 81; ++i) any_fold[i] = any_fold[i] || marks[i];
  }
  out << "Mean devtest accuracy over " << report.folds.size()
      << " folds (left window across, right window down;\n"
         "* = ensemble member in at least one fold)\n\n";
  out << render_grid(report.mean_devtest, any_fold) << "\n";
  out << "Sample standard deviation of devtest accuracy\n\n";
  out << render_grid(report.std_devtest, {}) << "\n";

  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    const auto& fold = report.folds[f];
    out << "Fold " << f + 1 << ": train=" << fold.train_size << " devtest=" << fold.devtest_size
        << " test=" << fold.test_size << " ensemble test accuracy="
        << fixed(fold.ensemble_test_accuracy, 4) << "\n\n";
    out << render_grid(fold.devtest_accuracy, member_marks(fold.members)) << "\n";
  }

  out << "ensemble test accuracy (mean over folds): " << fixed(report.ensemble_test_accuracy, 4)
      << "\n";
  out << "best single classifier " << to_string(report.best_single)
      << " test accuracy (mean over folds): " << fixed(report.best_single_test_accuracy, 4)
      << "\n";
  const auto& m = report.mcnemar;
  out << "McNemar (" << to_string(m.method) << ", pooled test predictions): ensemble-only correct="
      << m.only_a_correct << " best-single-only correct=" << m.only_b_correct
      << " statistic=" << fixed(m.statistic, 4) << " p=" << m.p_value
      << " significant at p=.01: " << (m.significant ? "yes" : "no") << "\n";
  out << summary_line(report) << "\n";
  return out.str();
}

std::string render_json_report(const ExperimentReport& report) {
  using json = nlohmann::ordered_json;
  const auto grid = [](const SpecGrid& g) { return json(std::vector<double>(g.begin(), g.end())); };
  const auto& c = report.config;

  json doc;
  doc["schema"] = "wsd-experiment-report/1";
  doc["config"] = {{"k", c.k},
                   {"seed", c.seed},
                   {"epsilon", c.epsilon},
                   {"vote", to_string(c.vote)},
                   {"scoring", std::string(to_string(c.scoring))},
                   {"stratify_halves", c.stratify_halves},
                   {"mcnemar", std::string(to_string(c.mcnemar))}};
  doc["corpus"] = {{"target_word", report.target_word},
                   {"instances", report.instance_count},
                   {"senses", report.senses}};
  doc["window_sizes"] = std::vector<int>(kWindowSizes.begin(), kWindowSizes.end());

  json folds = json::array();
  for (std::size_t f = 0; f < report.folds.size(); ++f) {
    const auto& fold = report.folds[f];
    json members = json::array();
    for (const auto& m : fold.members) {
      members.push_back({{"category", to_string(m.category)},
                         {"left", m.spec.left()},
                         {"right", m.spec.right()},
                         {"devtest_accuracy", m.devtest_accuracy}});
    }
    folds.push_back({{"fold", f + 1},
                     {"train_size", fold.train_size},
                     {"devtest_size", fold.devtest_size},
                     {"test_size", fold.test_size},
                     {"devtest_accuracy", grid(fold.devtest_accuracy)},
                     {"test_accuracy", grid(fold.test_accuracy)},
                     {"members", members},
                     {"ensemble_test_accuracy", fold.ensemble_test_accuracy}});
  }
  doc["folds"] = folds;
  doc["mean_devtest_accuracy"] = grid(report.mean_devtest);
  doc["std_devtest_accuracy"] = grid(report.std_devtest);
  doc["ensemble_test_accuracy"] = report.ensemble_test_accuracy;
  doc["best_single"] = {{"left", report.best_single.left()},
                        {"right", report.best_single.right()},
                        {"mean_devtest_accuracy",
                         report.mean_devtest[report.best_single.grid_index()]},
                        {"test_accuracy", report.best_single_test_accuracy}};
  const auto& m = report.mcnemar;
  doc["mcnemar"] = {{"method", std::string(to_string(m.method))},
                    {"ensemble_only_correct", m.only_a_correct},
                    {"best_single_only_correct", m.only_b_correct},
                    {"statistic", m.statistic},
                    {"p_value", m.p_value},
                    {"significant", m.significant}};
  return doc.dump(2) + "\n";
}

}  // namespace wsd
