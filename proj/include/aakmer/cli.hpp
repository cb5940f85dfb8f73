#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aakmer::cli {

// Runs the command line in-process. Returns 0 on success, 1 on bad input or
// usage, 2 on internal failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aakmer::cli
