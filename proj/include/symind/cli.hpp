#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "symind/report.hpp"

namespace symind::cli {

// 0 computed (integer or infinite), 2 undetermined
int exit_code_for(const Verdict& v);

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symind::cli
