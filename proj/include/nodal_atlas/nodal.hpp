// Sampling eigenfunctions on grids and counting their nodal domains and
// nodal-set components.
//
// Conventions
//   * Square grids hold res x res nodes at i/(res-1), boundary ring exactly 0.
//     Only the interior nodes 1..res-2 take part in domain counting.
//   * Torus grids hold res x res nodes at i/res with periodic wrap.
//   * A sample with |value| <= zero_tolerance is a nodal point and belongs to
//     no domain.  Domains are 4-connected components of same-sign samples.
//   * A cell whose diagonal corners share a sign while the other two corners
//     do not (the saddle pattern, possibly with zero corners) is ambiguous.
//     It is resolved by the sign of phi at the saddle critical point inside
//     the cell when Newton finds one, otherwise by recursive subdivision with
//     exact evaluation.  A saddle value below the singular tolerance is a
//     crossing: neither diagonal connects.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nodal_atlas/spectra.hpp"

namespace nodal_atlas::nodal {

enum class GridKind { SquareDirichlet, TorusPeriodic };

struct SingularPoint {
  double x = 0.0;
  double y = 0.0;
  int order = 2;
  double residual = 0.0;  // max(|phi|, |grad phi| / sqrt(lambda)) at the refined point
  double radius = 0.0;    // circle radius used to measure the order
};

struct CriticalPoint {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
  double hessian_det = 0.0;
};

struct SingularOptions {
  // Coarse screen: a node is a candidate when max(|phi|, |grad phi| h) <= candidate_threshold * amp
  // somewhere in its 3x3 block, or both gradient components change sign there
  // while phi does too.
  double candidate_threshold = 1e-3;
  // Acceptance after Newton, relative to the amplitude.
  double tolerance = 1e-9;
};

struct CellResolution {
  int i = 0;
  int j = 0;
  // Labels for corners (i,j), (i+1,j), (i+1,j+1), (i,j+1); equal labels are
  // connected inside the cell, -1 marks a zero corner.
  std::array<int, 4> corner_class{-1, -1, -1, -1};
  int depth = 0;          // subdivision depth reached (0: decided by a saddle point)
  bool crossing = false;  // decided as a singular crossing
  bool unresolved = false;
};

struct GridField {
  explicit GridField(Eigenfunction f) : source(std::move(f)) {}

  GridKind kind = GridKind::SquareDirichlet;
  int resolution = 0;
  std::vector<double> values;  // values[i * resolution + j] = phi(x_i, y_j)
  std::vector<CellResolution> refined_cells;
  std::vector<SingularPoint> singular_points;
  double amplitude = 1.0;
  double zero_tolerance = 0.0;
  double singular_tolerance = 1e-9;
  Eigenfunction source;

  double spacing() const noexcept;
  double coord(int i) const noexcept;
  double at(int i, int j) const noexcept;
  int sign_at(int i, int j) const noexcept;
  int wrap(int i) const noexcept;
  bool periodic() const noexcept { return kind == GridKind::TorusPeriodic; }
  // Index range of cells that take part in the topology: [first_cell, last_cell].
  int first_cell() const noexcept { return periodic() ? 0 : 1; }
  int last_cell() const noexcept { return periodic() ? resolution - 1 : resolution - 3; }
};

struct SamplingOptions {
  bool allow_coarse = false;  // bypass the wavelength-based resolution floor
  int max_depth = 6;
  SingularOptions singular;
};

// 8 samples per half wavelength, at least 16.
int resolution_floor(const Eigenfunction& f);
// Default sampling: 16 per half wavelength, at least 64.
int default_resolution(const Eigenfunction& f);

GridField sample_grid(const Eigenfunction& f, int resolution, const SamplingOptions& options = {});

struct NodalCensus {
  int N = 0;
  int C = 0;
  std::optional<int> N_s;
  std::optional<int> N_c;
  std::optional<int> boundary_endpoints;
  int singular_points = 0;
  int refined_cells = 0;
};

NodalCensus count_nodal_domains(const GridField& grid);
NodalCensus extract_nodal_components(const GridField& grid);
// Both of the above in one pass.
NodalCensus take_census(const GridField& grid);

// All critical points (grad phi = 0) found from a grid screen plus Newton.
std::vector<CriticalPoint> find_critical_points(const Eigenfunction& f, int coarse_resolution);

// Interior zeros of phi where grad phi also vanishes, with vanishing orders.
std::vector<SingularPoint> find_singular_points(const Eigenfunction& f, int coarse_resolution,
                                                const SingularOptions& options = {});

// Half the number of sign changes of phi around the circle of the given radius
// centred at (x, y).  Throws RadiusTooLarge when the count is odd or changes
// when the radius is halved, PreconditionViolation when (x, y) is not a zero.
int vanishing_order(const Eigenfunction& f, double x, double y, double radius);

// Default measuring radius: a quarter of the distance to the nearest other
// critical point, and at most half the distance to the square boundary.
double default_order_radius(const Eigenfunction& f, double x, double y,
                            const std::vector<CriticalPoint>& critical);

// Sign-change angles of phi on a circle, ascending in [0, 2 pi).
std::vector<double> circle_sign_changes(const Eigenfunction& f, double x, double y,
                                        double radius, int samples);

// Periodic or Euclidean distance depending on the domain.
double domain_distance(Domain domain, double x0, double y0, double x1, double y1);

}  // namespace nodal_atlas::nodal
