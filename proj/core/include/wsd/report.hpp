#pragma once

#include <string>

#include "wsd/evaluation.hpp"

namespace wsd {

/// Human-readable report: summary, then the mean devtest accuracy grid with
/// the left window along the bottom, the right window down the side (50 at
/// the top), rules between range categories and a '*' on every spec selected
/// in at least one fold; then one grid per fold with that fold's members
/// marked.
std::string render_text_report(const ExperimentReport& report);

/// Structured JSON report (schema "wsd-experiment-report/1", see README).
std::string render_json_report(const ExperimentReport& report);

// One line: ensemble=<acc> best_single=<acc> mcnemar=<stat> significant=<bool>
std::string summary_line(const ExperimentReport& report);

}  // namespace wsd
