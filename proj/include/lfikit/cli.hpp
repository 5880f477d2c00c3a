#ifndef LFIKIT_CLI_HPP
#define LFIKIT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lfikit {

// Exit codes: 0 holds/valid/accepted, 1 countermodel/rejected/selftest
// failure, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace lfikit

#endif
