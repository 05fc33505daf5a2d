#include <cstdlib>
#include <iostream>
#include <thread>

#include "vnlab/verify.hpp"

int main(int argc, char** argv) {
  vnlab::VerifyOptions opt;
  opt.golden_dir = VNLAB_GOLDEN_DIR;
  opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  for (int i = 1; i < argc; ++i) opt.only.insert(std::atoi(argv[i]));
  const auto results = vnlab::run_acceptance(opt, std::cout);
  std::size_t failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
