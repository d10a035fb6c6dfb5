#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "qli/parallel.hpp"

using namespace qli;

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 4);
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, EmptyRangeIsNoop) {
  parallel_for(0, [](std::size_t) { FAIL(); }, 4);
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallel_for(
                   100, [](std::size_t i) { if (i == 37) throw std::runtime_error("x"); }, 3),
               std::runtime_error);
}

TEST(Parallel, EnvironmentCapsThreads) {
  ::setenv("QLI_THREADS", "2", 1);
  EXPECT_EQ(resolve_threads(8), 2u);
  EXPECT_EQ(resolve_threads(1), 1u);
  ::unsetenv("QLI_THREADS");
  EXPECT_EQ(resolve_threads(8), 8u);
  EXPECT_GE(resolve_threads(0), 1u);
}
