// Mesh-intersection counting: vertical line meshes on the square, shifted
// closed-geodesic meshes on the torus, and the nodal-domain bounds they give.
#pragma once

#include <optional>
#include <vector>

#include "nodal_atlas/lattice.hpp"
#include "nodal_atlas/nodal.hpp"
#include "nodal_atlas/spectra.hpp"

namespace nodal_atlas::meshbound {

inline constexpr double kDefaultDelta = 1e-3;
inline constexpr double kGoldenShrink = 0.6180339887498949;  // golden ratio minus one
inline constexpr int kMeshRetries = 8;
inline constexpr double kPositionStability = 1e-6;

// Vertical lines x_k = pi k / sqrt(tau - pi^2), k = 1..floor(sqrt(tau - pi^2)/pi),
// the nodal set of sin(sqrt(tau - pi^2) x) sin(pi y), with tau = lambda (1 + delta).
struct SquareMesh {
  double lambda = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  std::vector<double> lines;
};

SquareMesh build_square_mesh(double lambda, double delta = kDefaultDelta);

// Sign-change positions of y -> phi(x0, y) on (0, 1).  Sampled at
// samples_per_mode * (b_max + 1) points, each change bisected to 1e-10.
// Throws DegenerateRestriction when the restriction vanishes identically.
std::vector<double> line_sign_changes(const SquareEigenfunction& f, double x0,
                                      int samples_per_mode = 8);
int sign_changes_on_line(const SquareEigenfunction& f, double x0);

// lambda/(2 pi^2) + 2 sqrt(lambda)/pi + 1.
double square_bound(double lambda);
// Same chain at a finite tau: sqrt(tau - pi^2) sqrt(lambda) / (2 pi^2) + 2 sqrt(lambda)/pi + 1.
double square_bound_at(double lambda, double tau);

struct SquareDetails {
  double tau = 0.0;
  double delta = 0.0;
  int retries = 0;
  std::vector<double> lines;
  int line_limit = 0;           // floor(sqrt(lambda)/pi)
  bool line_limit_ok = true;    // every per-line count within line_limit
  int boundary_endpoints = 0;
  double endpoint_limit = 0.0;  // 4 sqrt(lambda)/pi
  bool endpoints_ok = true;
  std::optional<int> N_s;
  std::optional<int> N_c;
  double finite_tau_bound = 0.0;
  double limit_bound = 0.0;
};

struct TorusDetails {
  int p = 0;
  int q = 1;
  double theta = 0.0;
  double epsilon = 0.0;
  double tau = 0.0;
  double offset = 0.0;             // translation applied to the whole mesh
  int retries = 0;
  std::vector<double> shifts;      // x-offsets k tau, k = 1..ceil(1/(q tau))
  bool includes_E = true;
  double projection_limit = 0.0;   // W = sqrt(n) sqrt(p^2+q^2) cos(theta - epsilon)
  int max_frequency = 0;           // max |a p + b q| over the circle
  std::vector<int> per_geodesic;   // sign changes along each shifted geodesic
  std::vector<int> per_E;          // sign changes along the two coordinate circles
  bool geodesic_limit_ok = true;   // each geodesic count <= 2 W
  bool E_limit_ok = true;          // each coordinate-circle count <= 2 sqrt(n)
  int total_intersections = 0;
  bool component_count_ok = true;  // 2C <= total intersections
  double leading_term = 0.0;       // (lambda / 2 pi^2) cos(theta - epsilon)
  double chain_bound = 0.0;        // W ceil(1/(q tau)) + 2 sqrt(n), as printed
  double chain_bound_plus_one = 0.0;  // with the +1 from N <= C + 1
  bool below_circle = false;       // n > p^2 + q^2 for the chosen direction
};

struct BoundReport {
  double lambda = 0.0;
  double bound_value = 0.0;
  int measured_N = 0;
  int measured_C = 0;
  std::vector<int> per_line_sign_changes;       // mesh lines, or geodesics then E
  std::vector<int> intersections_per_component;  // closed components only on the square
  bool every_component_twice = true;             // each listed count >= 2
  bool satisfied = false;                        // measured_N <= bound_value
  bool advisory = false;                         // singular points present
  int singular_points = 0;
  int resolution = 0;
  std::optional<SquareDetails> square;
  std::optional<TorusDetails> torus;

  // Every asserted inequality in the report.
  bool all_checks_hold() const;
};

struct VerifyOptions {
  double delta = kDefaultDelta;
  int resolution = 0;  // 0: default resolution of the eigenfunction
  nodal::SingularOptions singular;
};

BoundReport verify_square_counting(const SquareEigenfunction& f, const VerifyOptions& options = {});

// (pi^2 / tau^2)(1 + p^2/q^2): first Dirichlet eigenvalue of a strip between
// consecutive shifted geodesics.
double strip_first_eigenvalue(int p, int q, double tau);
// tau with strip_first_eigenvalue(p, q, tau) = lambda.
double choose_tau(double lambda, int p, int q);

struct TorusMesh {
  int p = 0;
  int q = 1;
  double tau = 0.0;
  double offset = 0.0;
  std::vector<double> shifts;
  bool includes_E = true;
};

TorusMesh build_torus_mesh(int p, int q, double tau, double offset = 0.0);

// Sign changes of t -> phi(p t + s, q t + offset) over one period t in [0, 1).
std::vector<double> geodesic_sign_changes(const TorusEigenfunction& f, int p, int q, double s,
                                          double y_offset = 0.0, int samples_per_mode = 8);

BoundReport verify_torus_counting(const TorusEigenfunction& f, double theta, double epsilon,
                                  const VerifyOptions& options = {});

}  // namespace nodal_atlas::meshbound
