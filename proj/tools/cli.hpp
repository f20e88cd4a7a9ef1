#pragma once

#include <ostream>

namespace mildrep::cli {

/// Exit codes: 0 success, 1 invalid flags or input, 2 numerical failure.
/// Errors are reported on `err` as one JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mildrep::cli
