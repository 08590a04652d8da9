#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  int code = 0;
  auto config = gl2sup::cli::parse_arguments(argc, argv, std::cerr, code);
  if (!config) return code;
  return gl2sup::cli::run(*config, std::cout, std::cerr);
}
