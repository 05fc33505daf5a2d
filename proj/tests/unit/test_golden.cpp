#include <gtest/gtest.h>

#include <thread>

#include "vnlab/verify.hpp"

using namespace vnlab;

TEST(GoldenRegression, MatchesCommittedBaselines) {
  VerifyOptions opt;
  opt.golden_dir = VNLAB_GOLDEN_DIR;
  opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  for (const auto& g : run_golden_regressions(opt)) EXPECT_TRUE(g.pass) << g.file << ": " << g.detail;
}
