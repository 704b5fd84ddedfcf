#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  const opalg::cli::Result r = opalg::cli::run({argv + 1, argv + argc});
  std::cout << r.out;
  std::cerr << r.err;
  return r.exit_code;
}
