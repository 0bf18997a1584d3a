#pragma once
/// @file cli.hpp
/// @brief Command-line front end. Exit codes: 0 ok, 2 usage, 3 domain,
/// 4 numerical failure.

#include <ostream>
#include <string>
#include <vector>

namespace sharpbmo {

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sharpbmo
