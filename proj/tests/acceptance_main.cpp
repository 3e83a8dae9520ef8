// Runs one acceptance criterion; the exit status is its pass/fail line.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "gclm/cli.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion id>\n");
    return 2;
  }
  const auto r = gclm::acceptance::run_criterion(std::atoi(argv[1]), gclm::default_threads());
  gclm::cli::print_result(stdout, r);
  std::printf("ACCEPTANCE %d %s\n", r.id, r.pass ? "PASS" : "FAIL");
  return r.pass ? 0 : 1;
}
