#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "nodal_atlas/errors.hpp"
#include "nodal_atlas/lattice.hpp"
#include "nodal_atlas/spectra.hpp"

using namespace nodal_atlas;
using namespace nodal_atlas::lattice;

namespace {

std::set<std::pair<int, int>> brute_solutions(long n) {
  std::set<std::pair<int, int>> out;
  const int r = static_cast<int>(std::sqrt(static_cast<double>(n))) + 1;
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b)
      if (static_cast<long>(a) * a + static_cast<long>(b) * b == n) out.insert({a, b});
  return out;
}

// Largest circular gap between solution angles, computed independently.
double brute_max_gap(long n) {
  std::vector<double> ang;
  for (auto [a, b] : brute_solutions(n)) {
    double t = std::atan2(static_cast<double>(b), static_cast<double>(a));
    if (t < 0) t += 2 * kPi;
    ang.push_back(t);
  }
  std::sort(ang.begin(), ang.end());
  double best = 0.0;
  for (std::size_t i = 0; i < ang.size(); ++i) {
    const double next = i + 1 < ang.size() ? ang[i + 1] : ang[0] + 2 * kPi;
    best = std::max(best, next - ang[i]);
  }
  return best;
}

}  // namespace

TEST_CASE("solutions of a^2 + b^2 = n") {
  auto c5 = sum_two_squares(5);
  CHECK(c5.solutions.size() == 8);
  CHECK(sum_two_squares(3).solutions.empty());
  CHECK(sum_two_squares(25).solutions.size() == 12);
  CHECK(sum_two_squares(65).solutions.size() == 16);

  std::set<std::pair<int, int>> got;
  for (auto p : sum_two_squares(25).solutions) got.insert({p.a, p.b});
  CHECK(got == brute_solutions(25));
}

TEST_CASE("fast count matches brute force for n <= 10^4") {
  for (long n = 1; n <= 10000; ++n) {
    const long brute = static_cast<long>(brute_solutions(n).size());
    REQUIRE(count_two_squares(n) == brute);
    if (n <= 2000) REQUIRE(static_cast<long>(sum_two_squares(n).solutions.size()) == brute);
  }
}

TEST_CASE("solutions are sorted by angle") {
  auto c = sum_two_squares(325);
  for (std::size_t i = 1; i < c.angles.size(); ++i) CHECK(c.angles[i - 1] < c.angles[i]);
  CHECK(c.angles.front() >= 0.0);
  CHECK(c.angles.back() < 2 * kPi);
}

TEST_CASE("sector membership") {
  CHECK(sector_membership(sum_two_squares(5), 2 * kPi / 9).member);
  CHECK_FALSE(sector_membership(sum_two_squares(25), kPi / 2).member);
  CHECK(sector_membership(sum_two_squares(1), kPi / 4).member);
  // exactly pi/2 still leaves an empty open sector
  CHECK(sector_membership(sum_two_squares(1), kPi / 2).member);
  auto empty = sector_membership(sum_two_squares(3), 1.0);
  CHECK(empty.empty_circle);

  for (long n = 1; n <= 1500; ++n) {
    const auto c = sum_two_squares(n);
    if (c.solutions.empty()) continue;
    const double gap = brute_max_gap(n);
    for (double theta : {kPi / 9, 2 * kPi / 9, kPi / 4, 0.5}) {
      // skip the razor's edge where rounding decides
      if (std::abs(gap - theta) < 1e-9) continue;
      CHECK(sector_membership(c, theta).member == (gap >= theta));
    }
  }
}

TEST_CASE("angular gaps") {
  auto g1 = angular_gaps(sum_two_squares(1));
  REQUIRE(g1.size() == 4);
  for (double g : g1) CHECK(g == doctest::Approx(kPi / 2));
  auto g2 = angular_gaps(sum_two_squares(2));
  for (double g : g2) CHECK(g == doctest::Approx(kPi / 2));

  auto g5 = angular_gaps(sum_two_squares(5));
  REQUIRE(g5.size() == 8);
  CHECK(g5.front() == doctest::Approx(brute_max_gap(5)));
  CHECK(g5.front() == doctest::Approx(std::atan(4.0 / 3.0)));
  // the gap between (2,1) and (1,2)
  CHECK(g5.back() == doctest::Approx(0.6435).epsilon(1e-4));

  bool threw = false;
  try {
    angular_gaps(sum_two_squares(3));
  } catch (const AtlasError& e) {
    threw = e.code() == ErrorCode::EmptyCircle;
  }
  CHECK(threw);
}

TEST_CASE("direction net") {
  auto wide = direction_net(kPi / 2 - 0.1);
  std::set<std::pair<int, int>> pts;
  for (auto p : wide.points) pts.insert({p.a, p.b});
  for (auto p : {std::pair{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}})
    CHECK(pts.count(p) == 1);

  for (double eps : {kPi / 8, kPi / 18, 0.05}) {
    auto net = direction_net(eps);
    CHECK(net.max_gap < eps);
    // independent gap check
    std::vector<double> ang;
    for (auto p : net.points) {
      double t = std::atan2(static_cast<double>(p.b), static_cast<double>(p.a));
      ang.push_back(t < 0 ? t + 2 * kPi : t);
    }
    std::sort(ang.begin(), ang.end());
    double worst = 2 * kPi + ang.front() - ang.back();
    for (std::size_t i = 1; i < ang.size(); ++i) worst = std::max(worst, ang[i] - ang[i - 1]);
    CHECK(worst < eps);
  }

  bool threw = false;
  try {
    direction_net(0.0);
  } catch (const AtlasError& e) {
    threw = e.code() == ErrorCode::PreconditionViolation;
  }
  CHECK(threw);
}

TEST_CASE("best direction satisfies the projection inequality exhaustively") {
  const double theta = kPi / 9, eps = kPi / 18;
  const auto net = direction_net(eps);
  for (long n : {5L, 13L, 17L, 29L, 37L}) {
    const auto c = sum_two_squares(n);
    const auto d = best_direction(c, theta, eps, net);
    const double ceiling = std::sqrt(static_cast<double>(n)) *
                           std::hypot(static_cast<double>(d.p), static_cast<double>(d.q)) *
                           std::cos(theta - eps);
    for (auto s : c.solutions) CHECK(std::abs(s.a * d.p + s.b * d.q) <= ceiling + 1e-12);
    CHECK(d.q >= 1);
    CHECK(projection_inequality_holds(c, d.p, d.q, theta, eps));
  }
  // 25 has a gap of only 36.87 degrees < 2 theta = 40 degrees
  bool rejected = false;
  try {
    best_direction(sum_two_squares(25), theta, eps, net);
  } catch (const AtlasError& e) {
    rejected = e.code() == ErrorCode::NotInSectorClass || e.code() == ErrorCode::NoValidDirection;
  }
  CHECK(rejected);
}
