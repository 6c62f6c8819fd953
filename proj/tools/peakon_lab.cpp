#include <string>
#include <vector>

#include "peakon/cli.hpp"

int main(int argc, char** argv) {
  return peakon::cli::run_main(std::vector<std::string>(argv, argv + argc));
}
