#ifndef SUPERODE_CLI_COMMANDS_HPP
#define SUPERODE_CLI_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace superode::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

/// Entry point shared by the executable and the tests; args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace superode::cli

#endif  // SUPERODE_CLI_COMMANDS_HPP
