#include <iostream>

#include "fraudgraph/cli.hpp"

int main(int argc, char** argv) {
  return fraudgraph::RunCli(argc, argv, std::cout, std::cerr);
}
