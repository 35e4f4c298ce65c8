#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semimarkov::cli {

/// Runs one command line (without the program name). Returns the exit status:
/// 0 success or true, 1 predicate false or closure conflict, 2 usage, parse or bound error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semimarkov::cli
