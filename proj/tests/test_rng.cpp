#include <doctest.h>

#include <cmath>
#include <set>

#include "partinv/rng.hpp"

using namespace partinv;

TEST_SUITE("rng") {

TEST_CASE("identical seed and stream id reproduce the sequence") {
  RngStream a(42, {1, 2, 3});
  RngStream b(42, {1, 2, 3});
  for (int i = 0; i < 200; ++i) REQUIRE(a.next_u64() == b.next_u64());

  RngStream c(42, {1, 2, 3});
  RngStream d(42, {1, 2, 3});
  for (int i = 0; i < 200; ++i) {
    REQUIRE(c.next_double() == d.next_double());
  }
  RngStream e(42, {1, 2, 3});
  RngStream f(42, {1, 2, 3});
  for (int i = 0; i < 200; ++i) REQUIRE(e.next_normal() == f.next_normal());
}

TEST_CASE("distinct stream ids decorrelate") {
  RngStream a(42, {1, 2, 3});
  RngStream b(42, {1, 2, 4});
  RngStream c(42, {1, 2});  // prefix must differ from {1,2,0}
  RngStream d(42, {1, 2, 0});
  int equal_ab = 0;
  for (int i = 0; i < 64; ++i) equal_ab += (a.next_u64() == b.next_u64());
  CHECK(equal_ab == 0);
  CHECK(c.next_u64() != d.next_u64());
}

TEST_CASE("uniform doubles live in [0,1) with the right mean") {
  RngStream rng(7, {0});
  double sum = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double se = 1.0 / std::sqrt(12.0 * draws);
  CHECK(std::abs(sum / draws - 0.5) < 4.0 * se);
}

TEST_CASE("normal draws have zero mean and unit variance") {
  RngStream rng(11, {5});
  const int draws = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = rng.next_normal();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / draws;
  const double var = sumsq / draws - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(draws)));
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("next_below stays inside the bound") {
  RngStream rng(3, {9});
  for (int i = 0; i < 1000; ++i) REQUIRE(rng.next_below(7) < 7);
  CHECK_THROWS_AS(rng.next_below(0), std::invalid_argument);
}

TEST_CASE("sample_without_replacement is sorted and distinct") {
  RngStream rng(19, {2});
  const IndexSet s = rng.sample_without_replacement(100, 20);
  REQUIRE(s.size() == 20);
  std::set<Index> uniq(s.begin(), s.end());
  CHECK(uniq.size() == 20);
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK(*s.begin() >= 0);
  CHECK(s.back() < 100);

  const IndexSet full = rng.sample_without_replacement(10, 10);
  for (Index i = 0; i < 10; ++i) CHECK(full[static_cast<std::size_t>(i)] == i);
  CHECK_THROWS_AS(rng.sample_without_replacement(5, 6), std::invalid_argument);
}

TEST_CASE("permutation covers the range") {
  RngStream rng(23, {4});
  const IndexSet p = rng.permutation(50);
  std::set<Index> uniq(p.begin(), p.end());
  REQUIRE(uniq.size() == 50);
  CHECK(*uniq.begin() == 0);
  CHECK(*uniq.rbegin() == 49);
}

}  // TEST_SUITE
