#include "nodal_atlas/meshbound.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <string>

#include "nodal_atlas/errors.hpp"
#include "nodal_atlas/topology.hpp"

namespace nodal_atlas::meshbound {

namespace {

constexpr double kBisectWidth = 1e-10;
// Below this width an interval that can neither be certified root-free nor
// shows a sign change is taken to hold a tangency.
constexpr double kTangencyWidth = 1e-12;

struct SignChanges {
  std::vector<double> positions;
  bool tangency = false;
};

// Sign changes of fn on [0, 1): samples at (k + 0.5)/S, each change bisected.
// Between same-sign samples the interval is certified root-free when
// |f(a)| + |f(b)| > lipschitz (b - a), otherwise it is split, so close root
// pairs are found no matter how fine the sampling.  With periodic, the last and
// first samples are neighbours as well.
SignChanges locate_sign_changes(const std::function<double(double)>& fn, int samples,
                                bool periodic, double lipschitz) {
  std::vector<double> t(samples), v(samples);
  for (int k = 0; k < samples; ++k) {
    t[k] = (k + 0.5) / samples;
    v[k] = fn(t[k]);
  }
  std::vector<int> nonzero;
  for (int k = 0; k < samples; ++k)
    if (v[k] != 0.0) nonzero.push_back(k);
  SignChanges out;
  if (nonzero.size() < 2) return out;

  auto bisect = [&](double a, double b, double fa) {
    while (b - a > kBisectWidth) {
      const double mid = 0.5 * (a + b);
      const double fm = fn(mid);
      if (fm == 0.0) return mid;
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  std::function<void(double, double, double, double)> scan = [&](double a, double fa, double b,
                                                                 double fb) {
    if ((fa > 0.0) != (fb > 0.0)) {
      out.positions.push_back(bisect(a, b, fa));
      return;
    }
    if (std::abs(fa) + std::abs(fb) > lipschitz * (b - a)) return;
    if (b - a < kTangencyWidth) {
      out.tangency = true;
      return;
    }
    double mid = 0.5 * (a + b);
    double fm = fn(mid);
    if (fm == 0.0) {
      mid += 1e-3 * (b - a);
      fm = fn(mid);
    }
    scan(a, fa, mid, fm);
    scan(mid, fm, b, fb);
  };

  const std::size_t m = nonzero.size();
  const std::size_t pairs = periodic ? m : m - 1;
  for (std::size_t i = 0; i < pairs; ++i) {
    const int k0 = nonzero[i], k1 = nonzero[(i + 1) % m];
    double a = t[k0], b = t[k1];
    if (b < a) b += 1.0;  // wraps past t = 1
    scan(a, v[k0], b, v[k1]);
  }
  for (double& r : out.positions)
    if (r >= 1.0) r -= 1.0;
  std::sort(out.positions.begin(), out.positions.end());
  return out;
}

bool positions_agree(const std::vector<double>& a, const std::vector<double>& b, bool periodic) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(a[i] - b[i]);
    if (periodic) d = std::min(d, 1.0 - d);
    if (d > kPositionStability) return false;
  }
  return true;
}

// Restriction of a square eigenfunction to x = x0: sum_b beta_b sin(pi b y).
std::map<int, double> line_modes(const SquareEigenfunction& f, double x0) {
  std::map<int, double> beta;
  for (const auto& t : f.terms()) beta[t.b] += t.coefficient * std::sin(kPi * t.a * x0);
  return beta;
}

SignChanges line_changes(const SquareEigenfunction& f, double x0, int samples_per_mode) {
  if (!(x0 > 0.0 && x0 < 1.0)) fail(ErrorCode::PreconditionViolation, "x0 must lie in (0, 1)");
  const auto beta = line_modes(f, x0);
  double size = 0.0;
  for (const auto& [b, c] : beta) size = std::max(size, std::abs(c));
  if (size <= 1e-12 * f.amplitude())
    fail(ErrorCode::DegenerateRestriction,
         "restriction to x = " + std::to_string(x0) + " vanishes identically");
  const int samples = samples_per_mode * (f.max_b() + 1);
  double lipschitz = 0.0;
  for (const auto& [b, c] : beta) lipschitz += kPi * b * std::abs(c);
  return locate_sign_changes(
      [&](double y) {
        double s = 0.0;
        for (const auto& [b, c] : beta) s += c * std::sin(kPi * b * y);
        return s;
      },
      samples, false, lipschitz);
}

// Combined Fourier modes of t -> phi(p t + s, q t + oy): frequency a p + b q.
std::map<int, std::complex<double>> geodesic_modes(const TorusEigenfunction& f, int p, int q,
                                                   double s, double oy) {
  std::map<int, std::complex<double>> modes;
  for (const auto& t : f.terms()) {
    const double phase = 2.0 * kPi * (t.a * s + t.b * oy);
    modes[t.a * p + t.b * q] += t.coefficient * std::polar(1.0, phase);
  }
  return modes;
}

SignChanges periodic_changes(const std::map<int, std::complex<double>>& modes,
                                     double scale, int samples_per_mode, const std::string& what) {
  int top = 0;
  double size = 0.0;
  for (const auto& [w, c] : modes) {
    size = std::max(size, std::abs(c));
    top = std::max(top, std::abs(w));
  }
  if (size <= 1e-12 * scale)
    fail(ErrorCode::DegenerateRestriction, what + " restriction vanishes identically");
  const int samples = samples_per_mode * (top + 1);
  double lipschitz = 0.0;
  for (const auto& [w, c] : modes) lipschitz += 2.0 * kPi * std::abs(w) * std::abs(c);
  return locate_sign_changes(
      [&](double t) {
        double s = 0.0;
        for (const auto& [w, c] : modes) s += (c * std::polar(1.0, 2.0 * kPi * w * t)).real();
        return s;
      },
      samples, true, lipschitz);
}

struct Transversality {
  std::string where;
};

int default_or(int resolution, const Eigenfunction& f) {
  return resolution > 0 ? resolution : nodal::default_resolution(f);
}

}  // namespace

SquareMesh build_square_mesh(double lambda, double delta) {
  if (!(delta > 0.0)) fail(ErrorCode::PreconditionViolation, "delta must be positive");
  if (!(lambda > kPi * kPi))
    fail(ErrorCode::PreconditionViolation, "lambda must exceed pi^2 for a nonempty mesh");
  SquareMesh mesh;
  mesh.lambda = lambda;
  mesh.delta = delta;
  mesh.tau = lambda * (1.0 + delta);
  const double w = std::sqrt(mesh.tau - kPi * kPi);
  const int count = static_cast<int>(std::floor(w / kPi));
  for (int k = 1; k <= count; ++k) mesh.lines.push_back(kPi * k / w);
  return mesh;
}

std::vector<double> line_sign_changes(const SquareEigenfunction& f, double x0,
                                      int samples_per_mode) {
  return line_changes(f, x0, samples_per_mode).positions;
}

int sign_changes_on_line(const SquareEigenfunction& f, double x0) {
  return static_cast<int>(line_changes(f, x0, 8).positions.size());
}

double square_bound(double lambda) {
  if (!(lambda > 0.0)) fail(ErrorCode::PreconditionViolation, "lambda must be positive");
  return lambda / (2.0 * kPi * kPi) + 2.0 * std::sqrt(lambda) / kPi + 1.0;
}

double square_bound_at(double lambda, double tau) {
  return std::sqrt(tau - kPi * kPi) * std::sqrt(lambda) / (2.0 * kPi * kPi) +
         2.0 * std::sqrt(lambda) / kPi + 1.0;
}

bool BoundReport::all_checks_hold() const {
  bool ok = satisfied && every_component_twice;
  if (square) ok = ok && square->line_limit_ok && square->endpoints_ok;
  if (torus)
    ok = ok && torus->geodesic_limit_ok && torus->E_limit_ok && torus->component_count_ok;
  return ok;
}

BoundReport verify_square_counting(const SquareEigenfunction& f, const VerifyOptions& options) {
  const double lambda = f.lambda();
  const int line_limit = static_cast<int>(std::floor(std::sqrt(static_cast<double>(f.m())) + 1e-12));

  SquareMesh mesh;
  std::vector<std::vector<double>> positions;
  double delta = options.delta;
  int retries = 0;
  std::string offending;
  for (;; ++retries) {
    if (retries > kMeshRetries)
      fail(ErrorCode::TransversalityFailure,
           "no transversal mesh after " + std::to_string(kMeshRetries) + " retries; " + offending);
    mesh = build_square_mesh(lambda, delta);
    positions.clear();
    try {
      for (double x : mesh.lines) {
        auto coarse = line_changes(f, x, 8);
        auto fine = line_changes(f, x, 16);
        if (coarse.tangency || fine.tangency ||
            !positions_agree(coarse.positions, fine.positions, false))
          throw Transversality{"line x = " + std::to_string(x)};
        positions.push_back(std::move(coarse.positions));
      }
      break;
    } catch (const Transversality& t) {
      offending = t.where;
    } catch (const AtlasError& e) {
      if (e.code() != ErrorCode::DegenerateRestriction) throw;
      offending = e.what();
    }
    delta *= kGoldenShrink;
  }

  const Eigenfunction ef = f;
  nodal::SamplingOptions sampling;
  sampling.singular = options.singular;
  const auto grid = nodal::sample_grid(ef, default_or(options.resolution, ef), sampling);
  const nodal::NodalTopology topo(grid);
  const auto census = nodal::take_census(grid);

  BoundReport r;
  r.lambda = lambda;
  r.bound_value = square_bound(lambda);
  r.measured_N = census.N;
  r.measured_C = census.C;
  r.singular_points = census.singular_points;
  r.advisory = census.singular_points > 0;
  r.resolution = grid.resolution;

  SquareDetails d;
  d.tau = mesh.tau;
  d.delta = mesh.delta;
  d.retries = retries;
  d.lines = mesh.lines;
  d.line_limit = line_limit;
  d.boundary_endpoints = census.boundary_endpoints.value_or(0);
  d.endpoint_limit = 4.0 * std::sqrt(lambda) / kPi;
  d.endpoints_ok = d.boundary_endpoints <= d.endpoint_limit + 1e-9;
  d.N_s = census.N_s;
  d.N_c = census.N_c;
  d.finite_tau_bound = square_bound_at(lambda, mesh.tau);
  d.limit_bound = r.bound_value;

  std::vector<int> hits(topo.component_count(), 0);
  for (std::size_t k = 0; k < mesh.lines.size(); ++k) {
    r.per_line_sign_changes.push_back(static_cast<int>(positions[k].size()));
    if (static_cast<int>(positions[k].size()) > line_limit) d.line_limit_ok = false;
    for (double y : positions[k])
      if (auto c = topo.component_near(mesh.lines[k], y)) ++hits[*c];
  }
  for (int c = 0; c < topo.component_count(); ++c) {
    if (topo.component_touches_boundary(c)) continue;
    r.intersections_per_component.push_back(hits[c]);
    if (hits[c] < 2) r.every_component_twice = false;
  }
  r.satisfied = r.measured_N <= r.bound_value;
  r.square = std::move(d);
  return r;
}

double strip_first_eigenvalue(int p, int q, double tau) {
  if (!(tau > 0.0) || q < 1) fail(ErrorCode::PreconditionViolation, "need tau > 0 and q >= 1");
  const double ratio = static_cast<double>(p) / q;
  return kPi * kPi / (tau * tau) * (1.0 + ratio * ratio);
}

double choose_tau(double lambda, int p, int q) {
  if (!(lambda > 0.0) || q < 1) fail(ErrorCode::PreconditionViolation, "need lambda > 0 and q >= 1");
  const double ratio = static_cast<double>(p) / q;
  return kPi * std::sqrt((1.0 + ratio * ratio) / lambda);
}

TorusMesh build_torus_mesh(int p, int q, double tau, double offset) {
  if (!(tau > 0.0) || q < 1) fail(ErrorCode::PreconditionViolation, "need tau > 0 and q >= 1");
  TorusMesh mesh;
  mesh.p = p;
  mesh.q = q;
  mesh.tau = tau;
  mesh.offset = offset;
  const int count = static_cast<int>(std::ceil(1.0 / (q * tau) - 1e-12));
  for (int k = 1; k <= count; ++k) mesh.shifts.push_back(k * tau);
  return mesh;
}

std::vector<double> geodesic_sign_changes(const TorusEigenfunction& f, int p, int q, double s,
                                          double y_offset, int samples_per_mode) {
  return periodic_changes(geodesic_modes(f, p, q, s, y_offset), f.coefficient_norm(),
                          samples_per_mode, "geodesic")
      .positions;
}

BoundReport verify_torus_counting(const TorusEigenfunction& f, double theta, double epsilon,
                                  const VerifyOptions& options) {
  const long n = f.n();
  const auto circle = lattice::sum_two_squares(n);
  if (!(2.0 * theta < 2.0 * kPi) || !lattice::sector_membership(circle, 2.0 * theta).member)
    fail(ErrorCode::NotInSectorClass,
         "n = " + std::to_string(n) + " has no empty open sector of width 2 theta");
  const auto net = lattice::direction_net(epsilon);
  const auto dir = lattice::best_direction(circle, theta, epsilon, net);
  const double lambda = f.lambda();
  const double tau = choose_tau(lambda, dir.p, dir.q);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double W = dir.ceiling;

  TorusMesh mesh;
  std::vector<std::vector<double>> geo, axes;
  int retries = 0;
  std::string offending;
  for (;; ++retries) {
    if (retries > kMeshRetries)
      fail(ErrorCode::TransversalityFailure,
           "no transversal mesh after " + std::to_string(kMeshRetries) + " retries; " + offending);
    // Offsets walk through the strip by golden-ratio steps.
    const double offset = std::fmod(retries * kGoldenShrink * tau, tau);
    mesh = build_torus_mesh(dir.p, dir.q, tau, offset);
    geo.clear();
    axes.clear();
    try {
      for (double s : mesh.shifts) {
        const auto modes = geodesic_modes(f, dir.p, dir.q, s + offset, offset);
        auto coarse = periodic_changes(modes, f.coefficient_norm(), 8, "geodesic");
        auto fine = periodic_changes(modes, f.coefficient_norm(), 16, "geodesic");
        if (coarse.tangency || fine.tangency ||
            !positions_agree(coarse.positions, fine.positions, true))
          throw Transversality{"geodesic shift " + std::to_string(s)};
        geo.push_back(std::move(coarse.positions));
      }
      // E: the circles y = offset (direction (1,0)) and x = offset (direction (0,1)).
      for (int axis = 0; axis < 2; ++axis) {
        const int p = axis == 0 ? 1 : 0, q = axis == 0 ? 0 : 1;
        auto modes = [&](double o) {
          std::map<int, std::complex<double>> m;
          for (const auto& t : f.terms()) {
            const double phase = 2.0 * kPi * (axis == 0 ? t.b * o : t.a * o);
            m[t.a * p + t.b * q] += t.coefficient * std::polar(1.0, phase);
          }
          return m;
        };
        auto coarse = periodic_changes(modes(offset), f.coefficient_norm(), 8, "coordinate circle");
        auto fine = periodic_changes(modes(offset), f.coefficient_norm(), 16, "coordinate circle");
        if (coarse.tangency || fine.tangency ||
            !positions_agree(coarse.positions, fine.positions, true))
          throw Transversality{axis == 0 ? "circle y = offset" : "circle x = offset"};
        axes.push_back(std::move(coarse.positions));
      }
      break;
    } catch (const Transversality& t) {
      offending = t.where;
    } catch (const AtlasError& e) {
      if (e.code() != ErrorCode::DegenerateRestriction) throw;
      offending = e.what();
    }
  }

  const Eigenfunction ef = f;
  nodal::SamplingOptions sampling;
  sampling.singular = options.singular;
  const auto grid = nodal::sample_grid(ef, default_or(options.resolution, ef), sampling);
  const nodal::NodalTopology topo(grid);

  BoundReport r;
  r.lambda = lambda;
  r.measured_N = topo.domain_count();
  r.measured_C = topo.component_count();
  r.singular_points = static_cast<int>(grid.singular_points.size());
  r.advisory = r.singular_points > 0;
  r.resolution = grid.resolution;

  TorusDetails d;
  d.p = dir.p;
  d.q = dir.q;
  d.theta = theta;
  d.epsilon = epsilon;
  d.tau = tau;
  d.offset = mesh.offset;
  d.retries = retries;
  d.shifts = mesh.shifts;
  d.projection_limit = W;
  d.max_frequency = static_cast<int>(std::lround(dir.max_projection));
  d.below_circle = dir.below_circle;

  std::vector<int> hits(topo.component_count(), 0);
  auto wrap = [](double v) { return v - std::floor(v); };
  for (std::size_t k = 0; k < geo.size(); ++k) {
    const int count = static_cast<int>(geo[k].size());
    d.per_geodesic.push_back(count);
    if (count > 2.0 * W * (1.0 + 1e-12)) d.geodesic_limit_ok = false;
    const double s = mesh.shifts[k] + mesh.offset;
    for (double t : geo[k])
      if (auto c = topo.component_near(wrap(dir.p * t + s), wrap(dir.q * t + mesh.offset)))
        ++hits[*c];
  }
  for (int axis = 0; axis < 2; ++axis) {
    const int count = static_cast<int>(axes[axis].size());
    d.per_E.push_back(count);
    if (count > 2.0 * root_n * (1.0 + 1e-12)) d.E_limit_ok = false;
    for (double t : axes[axis]) {
      const double x = axis == 0 ? t : mesh.offset, y = axis == 0 ? mesh.offset : t;
      if (auto c = topo.component_near(wrap(x), wrap(y))) ++hits[*c];
    }
  }
  r.per_line_sign_changes = d.per_geodesic;
  r.per_line_sign_changes.insert(r.per_line_sign_changes.end(), d.per_E.begin(), d.per_E.end());
  for (int v : r.per_line_sign_changes) d.total_intersections += v;
  d.component_count_ok = 2 * r.measured_C <= d.total_intersections;
  for (int c = 0; c < topo.component_count(); ++c) {
    r.intersections_per_component.push_back(hits[c]);
    if (hits[c] < 2) r.every_component_twice = false;
  }

  const double cosine = std::cos(theta - epsilon);
  d.leading_term = lambda / (2.0 * kPi * kPi) * cosine;
  const int K = static_cast<int>(mesh.shifts.size());
  d.chain_bound = W * K + 2.0 * root_n;
  d.chain_bound_plus_one = d.chain_bound + 1.0;
  r.bound_value = d.leading_term + W + 2.0 * root_n;
  r.satisfied = r.measured_N <= r.bound_value;
  r.torus = std::move(d);
  return r;
}

}  // namespace nodal_atlas::meshbound
