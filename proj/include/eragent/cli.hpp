#pragma once

namespace eragent {

/// Operator entry point. Exit codes: 0 success, 1 runtime failure,
/// 2 usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace eragent
