#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wsd::cli {

// Entry point of the `wsd` tool; args excludes the program name. Returns the
// process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Entry point of `wsd-synth`.
int run_synth(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wsd::cli
