#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linecell_cli {

// Runs the command-line front end on `args` (program name excluded), writing
// tabular results to `out` (unless an --out file is requested) and
// diagnostics to `err`. Returns the process exit status: 0 on success, 2 on
// usage/validation errors, 3 on numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace linecell_cli
