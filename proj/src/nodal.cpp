#include "nodal_atlas/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "newton.hpp"
#include "nodal_atlas/errors.hpp"
#include "nodal_atlas/topology.hpp"

namespace nodal_atlas::nodal {

double domain_distance(Domain domain, double x0, double y0, double x1, double y1) {
  double dx = x1 - x0, dy = y1 - y0;
  if (domain == Domain::Torus) {
    dx -= std::round(dx);
    dy -= std::round(dy);
  }
  return std::hypot(dx, dy);
}

namespace {

constexpr double kMergeRadius = 1e-6;
constexpr double kBoundaryMargin = 1e-2;  // in half-wavelengths

bool min_le_zero_le_max(const std::array<double, 4>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo <= 0.0 && *hi >= 0.0;
}

// Newton from every grid cell where both gradient components change sign.
// With require_zero, only cells where phi changes sign or nearly vanishes are
// tried, which is all a singular point can look like on the grid.
std::vector<detail::NewtonResult> scan_critical(const Eigenfunction& f, int resolution,
                                                bool require_zero, double threshold) {
  if (resolution < 4) fail(ErrorCode::PreconditionViolation, "coarse resolution too small");
  const bool torus = domain_of(f) == Domain::Torus;
  const int n = resolution;
  const double h = torus ? 1.0 / n : 1.0 / (n - 1);
  std::vector<double> coords(n);
  for (int i = 0; i < n; ++i) coords[i] = i * h;
  const auto values = evaluate_grid(f, coords, coords);
  const auto grads = gradient_grid(f, coords, coords);
  const double amp = amplitude_of(f);

  auto idx = [&](int i, int j) {
    if (torus) {
      i %= n;
      j %= n;
    }
    return static_cast<std::size_t>(i) * n + j;
  };
  const int cells = torus ? n : n - 1;
  // Near the square boundary phi and its gradient both vanish to high order,
  // so Newton creeps into the edge; those are not interior critical points.
  const double margin = std::max(kMergeRadius, kBoundaryMargin / frequency_scale(f));

  std::vector<detail::NewtonResult> found;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j) {
      const std::array<std::size_t, 4> k{idx(i, j), idx(i + 1, j), idx(i + 1, j + 1),
                                         idx(i, j + 1)};
      std::array<double, 4> gx{}, gy{}, v{};
      bool tiny = false;
      for (int c = 0; c < 4; ++c) {
        gx[c] = grads[0][k[c]];
        gy[c] = grads[1][k[c]];
        v[c] = values[k[c]];
        const double screen = std::max(std::abs(v[c]), std::hypot(gx[c], gy[c]) * h);
        if (screen <= threshold * amp) tiny = true;
      }
      bool candidate = min_le_zero_le_max(gx) && min_le_zero_le_max(gy);
      if (require_zero) {
        double vmin = std::numeric_limits<double>::infinity();
        for (double x : v) vmin = std::min(vmin, std::abs(x));
        candidate = (candidate && (min_le_zero_le_max(v) || vmin <= threshold * amp)) || tiny;
      }
      if (!candidate) continue;
      auto r = detail::newton_critical(f, (i + 0.5) * h, (j + 0.5) * h, h);
      if (!r) continue;
      const auto& p = r->point;
      if (!torus && std::min({p.x, 1.0 - p.x, p.y, 1.0 - p.y}) < margin) continue;
      bool duplicate = false;
      for (const auto& q : found)
        if (domain_distance(domain_of(f), p.x, p.y, q.point.x, q.point.y) < kMergeRadius) {
          duplicate = true;
          break;
        }
      if (!duplicate) found.push_back(*r);
    }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return a.point.x != b.point.x ? a.point.x < b.point.x : a.point.y < b.point.y;
  });
  return found;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const Eigenfunction& f, int coarse_resolution) {
  std::vector<CriticalPoint> out;
  for (const auto& r : scan_critical(f, coarse_resolution, false, 0.0)) out.push_back(r.point);
  return out;
}

std::vector<double> circle_sign_changes(const Eigenfunction& f, double x, double y,
                                        double radius, int samples) {
  if (!(radius > 0.0) || samples < 8)
    fail(ErrorCode::PreconditionViolation, "circle needs a positive radius and >= 8 samples");
  const double step = 2.0 * kPi / samples;
  auto value_at = [&](double a) {
    return evaluate(f, x + radius * std::cos(a), y + radius * std::sin(a));
  };
  std::vector<double> angle(samples), value(samples);
  for (int k = 0; k < samples; ++k) {
    angle[k] = (k + 0.5) * step;
    value[k] = value_at(angle[k]);
  }
  int last = -1;
  for (int k = samples - 1; k >= 0; --k)
    if (value[k] != 0.0) {
      last = k;
      break;
    }
  std::vector<double> out;
  if (last < 0) return out;

  int prev = last;
  for (int k = 0; k < samples; ++k) {
    if (value[k] == 0.0) continue;
    if ((value[k] > 0.0) != (value[prev] > 0.0)) {
      double a = angle[prev], b = angle[k];
      if (b < a) a -= 2.0 * kPi;
      double fa = value[prev];
      for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = value_at(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      double t = 0.5 * (a + b);
      if (t < 0.0) t += 2.0 * kPi;
      out.push_back(t);
    }
    prev = k;
  }
  std::sort(out.begin(), out.end());
  return out;
}

int vanishing_order(const Eigenfunction& f, double x, double y, double radius) {
  const double amp = amplitude_of(f);
  if (std::abs(evaluate(f, x, y)) > 1e-8 * amp)
    fail(ErrorCode::PreconditionViolation, "point is not a zero of the eigenfunction");
  if (!(radius > 0.0)) fail(ErrorCode::PreconditionViolation, "radius must be positive");
  const int outer = static_cast<int>(circle_sign_changes(f, x, y, radius, 256).size());
  const int samples = 64 * std::max(2, outer / 2);
  const int fine = static_cast<int>(circle_sign_changes(f, x, y, radius, samples).size());
  const int inner = static_cast<int>(circle_sign_changes(f, x, y, 0.5 * radius, samples).size());
  if (fine % 2 != 0 || fine != inner)
    fail(ErrorCode::RadiusTooLarge, "circle of radius " + std::to_string(radius) + " sees " +
                                        std::to_string(fine) + " sign changes, " +
                                        std::to_string(inner) + " at half the radius");
  return fine / 2;
}

double default_order_radius(const Eigenfunction& f, double x, double y,
                            const std::vector<CriticalPoint>& critical) {
  const Domain dom = domain_of(f);
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& c : critical) {
    const double d = domain_distance(dom, x, y, c.x, c.y);
    if (d > kMergeRadius) nearest = std::min(nearest, d);
  }
  double r = std::isfinite(nearest) ? 0.25 * nearest : 0.1 / frequency_scale(f);
  if (dom == Domain::Square) r = std::min(r, 0.5 * std::min({x, 1.0 - x, y, 1.0 - y}));
  return r;
}

std::vector<SingularPoint> find_singular_points(const Eigenfunction& f, int coarse_resolution,
                                                const SingularOptions& options) {
  const double amp = amplitude_of(f);
  const double root_lambda = std::sqrt(lambda_of(f));
  std::vector<SingularPoint> out;
  for (const auto& r : scan_critical(f, coarse_resolution, true, options.candidate_threshold)) {
    const double residual =
        std::max(std::abs(r.point.value), r.gradient_norm / root_lambda);
    if (!(residual < options.tolerance * amp)) continue;
    SingularPoint s;
    s.x = r.point.x;
    s.y = r.point.y;
    s.residual = residual;
    out.push_back(s);
  }
  if (out.empty()) return out;

  const auto critical = find_critical_points(f, coarse_resolution);
  for (auto& s : out) {
    double radius = default_order_radius(f, s.x, s.y, critical);
    for (int attempt = 0;; ++attempt) {
      try {
        s.order = vanishing_order(f, s.x, s.y, radius);
        s.radius = radius;
        break;
      } catch (const AtlasError& e) {
        if (e.code() != ErrorCode::RadiusTooLarge || attempt >= 6) throw;
        radius *= 0.25;
      }
    }
  }
  return out;
}

namespace {

struct Branches {
  int segments = 0;
  int closed = 0;
};

// Splits the nodal set at small disks around the singular points and glues
// the arcs back straight through each vertex: at an order-k point the
// crossing i continues as crossing i+k.  The resulting curves are the
// segments and closed curves of the decomposition.
std::optional<Branches> classify_branches(const GridField& grid, const NodalTopology& topo) {
  Branches out;
  if (grid.singular_points.empty()) {
    for (int c = 0; c < topo.component_count(); ++c)
      (topo.component_touches_boundary(c) ? out.segments : out.closed) += 1;
    return out;
  }
  const double h = grid.spacing();
  std::vector<Disk> disks;
  for (const auto& s : grid.singular_points) {
    if (s.radius < 2.0 * h) return std::nullopt;
    disks.push_back({s.x, s.y, s.radius});
  }
  const ArcSplit split = topo.split_at(disks);
  UnionFind branches(split.arc_count);
  for (std::size_t d = 0; d < disks.size(); ++d) {
    const auto& arcs = split.crossing_arcs[d];
    const int k = grid.singular_points[d].order;
    if (static_cast<int>(arcs.size()) != 2 * k) return std::nullopt;
    if (std::find(arcs.begin(), arcs.end(), -1) != arcs.end()) return std::nullopt;
    for (int i = 0; i < k; ++i) branches.unite(arcs[i], arcs[i + k]);
  }

  // Fragments cut off next to a disk that no crossing reaches are discarded.
  std::vector<bool> stub(split.arc_count, true);
  for (int a = 0; a < split.arc_count; ++a)
    if (!split.contacts[a].empty() || split.arc_touches_boundary[a]) stub[a] = false;
  for (int p = 0; p < topo.point_count(); ++p) {
    const int a = split.arc_of_point[p];
    if (a < 0 || !stub[a]) continue;
    const auto pos = topo.position(p);
    bool near = false;
    for (const auto& d : disks)
      if (std::hypot(pos[0] - d.x, pos[1] - d.y) < d.radius + 3.0 * h) near = true;
    if (!near) stub[a] = false;
  }

  std::vector<int> touches(split.arc_count, -1);  // per root: -1 unseen, 0 closed, 1 segment
  for (int a = 0; a < split.arc_count; ++a) {
    if (stub[a]) continue;
    const std::size_t r = branches.find(a);
    touches[r] = std::max(touches[r], split.arc_touches_boundary[a] ? 1 : 0);
  }
  for (int t : touches) {
    if (t == 1) ++out.segments;
    if (t == 0) ++out.closed;
  }
  return out;
}

NodalCensus census_from(const GridField& grid, const NodalTopology& topo, bool domains,
                        bool components) {
  NodalCensus c;
  c.singular_points = static_cast<int>(grid.singular_points.size());
  c.refined_cells = static_cast<int>(grid.refined_cells.size());
  if (domains) c.N = topo.domain_count();
  if (components) {
    c.C = topo.component_count();
    if (!grid.periodic()) {
      c.boundary_endpoints = topo.boundary_endpoints();
      if (auto b = classify_branches(grid, topo)) {
        c.N_s = b->segments;
        c.N_c = b->closed;
      }
    }
  }
  return c;
}

}  // namespace

NodalCensus count_nodal_domains(const GridField& grid) {
  const NodalTopology topo(grid);
  return census_from(grid, topo, true, false);
}

NodalCensus extract_nodal_components(const GridField& grid) {
  const NodalTopology topo(grid);
  return census_from(grid, topo, false, true);
}

NodalCensus take_census(const GridField& grid) {
  const NodalTopology topo(grid);
  return census_from(grid, topo, true, true);
}

}  // namespace nodal_atlas::nodal
