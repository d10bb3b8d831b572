#include "vews/cli.hpp"

int main(int argc, char** argv) {
  return vews::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
