// Command-line front end.  run() is separated from argument parsing so the
// commands can be driven from tests without spawning a process.

#ifndef J2KIT_TOOLS_CLI_HPP
#define J2KIT_TOOLS_CLI_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "j2kit/bounds.hpp"

namespace j2kit::cli {

enum Exit : int {
  kAffirmative = 0,
  kNegative = 1,
  kInconclusive = 2,
  kUsage = 64,
  kBadInput = 65,
  kNoInput = 66,
  kInternal = 70,
};

struct Invocation {
  std::string command;
  /// Formula strings and model file paths, in command order.
  std::vector<std::string> inputs;
  Bounds bounds;
  /// Explicit variable context; otherwise inferred from the inputs.
  std::optional<std::vector<std::string>> variables;
  bool json = false;
  /// Depth for bisim, charform and types.
  int depth = 1;
  /// World id: point of a model (model-check, charform, bisim first model).
  std::optional<int> world;
  std::optional<int> other_world;
  /// Variable count for `types` when no context is given.
  std::size_t nvars = 1;
  bool parenthesized = false;
};

struct Outcome {
  int exit_code = kAffirmative;
  std::string out;
  std::string err;
};

Outcome run(const Invocation& inv);

/// Parses argv (CLI11) and runs.  J2KIT_MAX_MEM (bytes, k/M/G suffixes
/// allowed) sets the memory budget.
int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace j2kit::cli

#endif  // J2KIT_TOOLS_CLI_HPP
