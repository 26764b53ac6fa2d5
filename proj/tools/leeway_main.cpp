#include <string>
#include <vector>

#include "leeway/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return leeway::cli::run(args);
}
