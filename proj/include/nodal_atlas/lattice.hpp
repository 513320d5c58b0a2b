// Integer points on the circle a^2 + b^2 = n and the angular-sector machinery
// used by the torus counting argument.
//
// A circle n belongs to the sector class of width theta when some open sector
// {alpha < arg < alpha + theta} contains no solution (a, b).  With solutions
// sorted by angle this is the statement "the largest circular gap is >= theta";
// an exact gap of theta still leaves an empty open sector.
#pragma once

#include <vector>

namespace nodal_atlas::lattice {

struct Point {
  int a = 0;
  int b = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct LatticeCircle {
  long n = 0;
  std::vector<Point> solutions;  // counter-clockwise from angle 0
  std::vector<double> angles;    // in [0, 2 pi), same order as solutions
  std::vector<double> gaps;      // gaps[i] = angle from solutions[i] to the next one
};

// Complete solution set by direct scan over |a| <= floor(sqrt(n)).
LatticeCircle sum_two_squares(long n);

// r_2(n) from the factorization of n: 4 * (d_1(n) - d_3(n)).
long count_two_squares(long n);

struct SectorVerdict {
  bool member = false;
  bool empty_circle = false;  // membership is vacuous, flagged rather than thrown
  double max_gap = 0.0;
};

inline constexpr double kGapTolerance = 1e-12;

SectorVerdict sector_membership(const LatticeCircle& circle, double theta);

// Circular gaps, sorted descending.  Throws EmptyCircle.
std::vector<double> angular_gaps(const LatticeCircle& circle);

struct DirectionNet {
  double epsilon = 0.0;
  int radius = 0;             // max(|p|,|q|) bound used for the construction
  std::vector<Point> points;  // primitive, sorted counter-clockwise
  double max_gap = 0.0;
};

// Primitive vectors with max(|p|,|q|) <= ceil(4/epsilon), verified to leave no
// angular gap >= epsilon.  Throws NetConstructionFailed if verification fails.
DirectionNet direction_net(double epsilon);

struct Direction {
  int p = 0;
  int q = 1;
  // max over solutions of |a p + b q| and the admissible ceiling
  // sqrt(n) sqrt(p^2+q^2) cos(theta - epsilon).
  double max_projection = 0.0;
  double ceiling = 0.0;
  // True when n > p^2 + q^2, which the asymptotic argument assumes of every
  // net point.  Small circles violate it; the inequality itself still holds.
  bool below_circle = false;
};

// A net direction (q >= 1) whose projections of all solutions satisfy
// |a p + b q| <= sqrt(n) sqrt(p^2+q^2) cos(theta - epsilon).  Smallest p^2+q^2
// wins, ties broken by (p, q).  Throws NotInSectorClass when the circle is not
// in the sector class of width 2 theta, NoValidDirection when no net point passes.
Direction best_direction(const LatticeCircle& circle, double theta, double epsilon,
                         const DirectionNet& net);

// Whether (p, q) satisfies the projection inequality for every solution.
bool projection_inequality_holds(const LatticeCircle& circle, int p, int q, double theta,
                                 double epsilon);

}  // namespace nodal_atlas::lattice
