#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pmsep/io.hpp"

namespace pmsep::cli {

enum ExitCode : int { kPass = 0, kRejected = 1, kInputError = 2, kResourceError = 3 };

/// Entry point shared by the executable and the tests. Reports go to `out`
/// (or to the --output file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// A subcommand's report document and its exit code.
struct Report {
  int exit_code = kPass;
  io::Json body;
  std::vector<io::Series> figures;
};

// Subcommands on parsed documents. Malformed input throws InputError (or a
// library error); the resource cap throws ResourceError.
Report validate(const io::Json& dataset);
Report check(const io::Json& dataset, bool flattest = false);
Report recover(const io::Json& dataset, bool flattest = false);
Report solve(const io::Json& problem, std::optional<std::size_t> refine = std::nullopt);
Report concavity(const io::Json& dataset, std::size_t budget = 10'000);
io::Json generate(const io::Json& spec);
Report verify(const io::Json& dataset, const io::Json& report);

}  // namespace pmsep::cli
