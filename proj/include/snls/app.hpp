#ifndef SNLS_APP_HPP
#define SNLS_APP_HPP

#include <ostream>
#include <string>
#include <vector>

namespace snls {

/// Command-line entry point. `args` excludes the program name. Returns the process
/// exit status: 0 only if the command ran and every check it performs passed.
int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snls

#endif
