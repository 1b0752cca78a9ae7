#pragma once

namespace mglab {

/// Subcommands: generate, run, sweep, report. Returns 0 on success, 1 on a
/// spec or usage error, 2 on an IO error.
int cli_main(int argc, const char* const* argv);

}  // namespace mglab
