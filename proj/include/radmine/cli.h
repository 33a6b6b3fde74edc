#ifndef RADMINE_CLI_H_
#define RADMINE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace radmine {

// The radmine command line. args excludes the program name. Returns the
// process exit status: 0 success, 1 stage or data error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace radmine

#endif  // RADMINE_CLI_H_
