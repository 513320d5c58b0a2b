#include "nodal_atlas/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nodal_atlas/errors.hpp"
#include "nodal_atlas/spectra.hpp"

namespace nodal_atlas::lattice {

namespace {

long isqrt(long n) {
  auto r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Upper half-plane (including the positive x axis) sorts before the lower half.
int half(const Point& v) { return (v.b < 0 || (v.b == 0 && v.a < 0)) ? 1 : 0; }

// Exact counter-clockwise order by angle in [0, 2 pi).
bool angle_less(const Point& l, const Point& r) {
  const int hl = half(l), hr = half(r);
  if (hl != hr) return hl < hr;
  const long cross = static_cast<long>(l.a) * r.b - static_cast<long>(l.b) * r.a;
  if (cross != 0) return cross > 0;
  return std::pair(l.a, l.b) < std::pair(r.a, r.b);
}

double angle_of(const Point& v) {
  double t = std::atan2(static_cast<double>(v.b), static_cast<double>(v.a));
  if (t < 0.0) t += 2.0 * kPi;
  return t;
}

std::vector<double> circular_gaps(const std::vector<double>& angles) {
  std::vector<double> gaps(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double next = (i + 1 < angles.size()) ? angles[i + 1] : angles.front() + 2.0 * kPi;
    gaps[i] = next - angles[i];
  }
  return gaps;
}

}  // namespace

LatticeCircle sum_two_squares(long n) {
  if (n < 1) fail(ErrorCode::PreconditionViolation, "n must be >= 1");
  LatticeCircle c;
  c.n = n;
  const long r = isqrt(n);
  for (long a = -r; a <= r; ++a) {
    const long rest = n - a * a;
    const long b = isqrt(rest);
    if (b * b != rest) continue;
    c.solutions.push_back({static_cast<int>(a), static_cast<int>(b)});
    if (b != 0) c.solutions.push_back({static_cast<int>(a), static_cast<int>(-b)});
  }
  std::sort(c.solutions.begin(), c.solutions.end(), angle_less);
  c.angles.reserve(c.solutions.size());
  for (const auto& s : c.solutions) c.angles.push_back(angle_of(s));
  c.gaps = circular_gaps(c.angles);
  return c;
}

long count_two_squares(long n) {
  if (n < 1) fail(ErrorCode::PreconditionViolation, "n must be >= 1");
  // r_2(n) = 4 * prod over p = 1 mod 4 of (e+1), zero if a p = 3 mod 4 has odd exponent.
  long result = 4;
  long rest = n;
  while (rest % 2 == 0) rest /= 2;
  for (long p = 3; p * p <= rest; p += 2) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e == 0) continue;
    if (p % 4 == 3) {
      if (e % 2 == 1) return 0;
    } else {
      result *= e + 1;
    }
  }
  if (rest > 1) {
    if (rest % 4 == 3) return 0;
    result *= 2;
  }
  return result;
}

SectorVerdict sector_membership(const LatticeCircle& circle, double theta) {
  if (!(theta > 0.0 && theta < 2.0 * kPi))
    fail(ErrorCode::PreconditionViolation, "theta must lie in (0, 2 pi)");
  SectorVerdict v;
  if (circle.solutions.empty()) {
    v.member = true;
    v.empty_circle = true;
    v.max_gap = 2.0 * kPi;
    return v;
  }
  v.max_gap = *std::max_element(circle.gaps.begin(), circle.gaps.end());
  v.member = v.max_gap >= theta - kGapTolerance;
  return v;
}

std::vector<double> angular_gaps(const LatticeCircle& circle) {
  if (circle.solutions.empty())
    fail(ErrorCode::EmptyCircle, "n = " + std::to_string(circle.n) + " has no representation");
  auto gaps = circle.gaps;
  std::sort(gaps.begin(), gaps.end(), std::greater<>());
  return gaps;
}

DirectionNet direction_net(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < kPi / 2.0))
    fail(ErrorCode::PreconditionViolation, "epsilon must lie in (0, pi/2)");
  DirectionNet net;
  net.epsilon = epsilon;
  net.radius = static_cast<int>(std::ceil(4.0 / epsilon));
  for (int p = -net.radius; p <= net.radius; ++p)
    for (int q = -net.radius; q <= net.radius; ++q)
      if ((p != 0 || q != 0) && std::gcd(p, q) == 1) net.points.push_back({p, q});
  std::sort(net.points.begin(), net.points.end(), angle_less);

  std::vector<double> angles;
  angles.reserve(net.points.size());
  for (const auto& v : net.points) angles.push_back(angle_of(v));
  const auto gaps = circular_gaps(angles);
  net.max_gap = *std::max_element(gaps.begin(), gaps.end());
  if (!(net.max_gap < epsilon))
    fail(ErrorCode::NetConstructionFailed,
         "largest angular gap " + std::to_string(net.max_gap) + " >= epsilon with radius " +
             std::to_string(net.radius));
  return net;
}

bool projection_inequality_holds(const LatticeCircle& circle, int p, int q, double theta,
                                 double epsilon) {
  const double ceiling = std::sqrt(static_cast<double>(circle.n)) *
                         std::sqrt(static_cast<double>(p * p + q * q)) * std::cos(theta - epsilon);
  for (const auto& s : circle.solutions) {
    const double proj = std::abs(static_cast<double>(s.a) * p + static_cast<double>(s.b) * q);
    if (proj > ceiling * (1.0 + 1e-12)) return false;
  }
  return true;
}

Direction best_direction(const LatticeCircle& circle, double theta, double epsilon,
                         const DirectionNet& net) {
  if (!(epsilon > 0.0 && epsilon < theta))
    fail(ErrorCode::PreconditionViolation, "need 0 < epsilon < theta");
  if (2.0 * theta >= 2.0 * kPi || !sector_membership(circle, 2.0 * theta).member)
    fail(ErrorCode::NotInSectorClass,
         "n = " + std::to_string(circle.n) + " has no empty sector of width 2 theta");

  std::vector<Point> candidates;
  for (auto v : net.points) {
    if (v.b < 0 || (v.b == 0 && v.a < 0)) v = {-v.a, -v.b};
    if (v.b < 1) continue;  // horizontal geodesics cannot be shifted along x
    if (std::find(candidates.begin(), candidates.end(), v) == candidates.end())
      candidates.push_back(v);
  }
  std::sort(candidates.begin(), candidates.end(), [](const Point& l, const Point& r) {
    const int nl = l.a * l.a + l.b * l.b, nr = r.a * r.a + r.b * r.b;
    return nl != nr ? nl < nr : std::pair(l.a, l.b) < std::pair(r.a, r.b);
  });

  for (const auto& v : candidates) {
    if (!projection_inequality_holds(circle, v.a, v.b, theta, epsilon)) continue;
    Direction d;
    d.p = v.a;
    d.q = v.b;
    d.ceiling = std::sqrt(static_cast<double>(circle.n)) *
                std::sqrt(static_cast<double>(v.a * v.a + v.b * v.b)) * std::cos(theta - epsilon);
    for (const auto& s : circle.solutions)
      d.max_projection = std::max(d.max_projection, std::abs(static_cast<double>(s.a) * v.a +
                                                             static_cast<double>(s.b) * v.b));
    d.below_circle = circle.n > static_cast<long>(v.a * v.a + v.b * v.b);
    return d;
  }
  fail(ErrorCode::NoValidDirection,
       "no net direction satisfies the projection inequality for n = " + std::to_string(circle.n));
}

}  // namespace nodal_atlas::lattice
