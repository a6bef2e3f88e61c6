#include "partinv/cli.hpp"

int main(int argc, char** argv) {
  return partinv::run_cli(argc, argv);
}
