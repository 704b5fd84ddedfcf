#pragma once

#include <string>
#include <vector>

namespace opalg::cli {

struct Result {
  int exit_code = 0;  // 0 ok, 1 domain error, 2 parse error
  std::string out;
  std::string err;
};

/// Runs one command line (without the program name).
Result run(const std::vector<std::string>& args);

}  // namespace opalg::cli
