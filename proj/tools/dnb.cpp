#include <cstdlib>
#include <iostream>

#include "dnb/cli.hpp"

int main(int argc, char** argv) {
  dnb::cli::Environment env;
  if (const char* dir = std::getenv("DNB_DATA_DIR"); dir != nullptr && *dir != '\0') env.data_dir = dir;
  return dnb::cli::run(argc, argv, std::cout, std::cerr, env);
}
