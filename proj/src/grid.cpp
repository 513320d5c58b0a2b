#include <algorithm>
#include <cmath>
#include <string>

#include "newton.hpp"
#include "nodal_atlas/errors.hpp"
#include "nodal_atlas/nodal.hpp"

namespace nodal_atlas::nodal {

double GridField::spacing() const noexcept {
  return periodic() ? 1.0 / resolution : 1.0 / (resolution - 1);
}

double GridField::coord(int i) const noexcept { return i * spacing(); }

int GridField::wrap(int i) const noexcept {
  if (!periodic()) return i;
  i %= resolution;
  return i < 0 ? i + resolution : i;
}

double GridField::at(int i, int j) const noexcept {
  return values[static_cast<std::size_t>(wrap(i)) * resolution + wrap(j)];
}

int GridField::sign_at(int i, int j) const noexcept {
  const double v = at(i, j);
  if (std::abs(v) <= zero_tolerance) return 0;
  return v > 0.0 ? 1 : -1;
}

int resolution_floor(const Eigenfunction& f) {
  return std::max(16, 8 * static_cast<int>(std::ceil(frequency_scale(f) - 1e-9)));
}

int default_resolution(const Eigenfunction& f) {
  return std::max(64, 16 * static_cast<int>(std::ceil(frequency_scale(f) - 1e-9)));
}

namespace {

int sign_of(double v, double ztol) {
  if (std::abs(v) <= ztol) return 0;
  return v > 0.0 ? 1 : -1;
}

bool is_ambiguous(const std::array<int, 4>& s) {
  const bool d02 = s[0] != 0 && s[0] == s[2] && s[1] != s[0] && s[3] != s[0];
  const bool d13 = s[1] != 0 && s[1] == s[3] && s[0] != s[1] && s[2] != s[1];
  return d02 || d13;
}

// Tiny union-find over the corners of one cell.
struct CornerSets {
  std::array<int, 4> parent{0, 1, 2, 3};
  int find(int k) { return parent[k] == k ? k : parent[k] = find(parent[k]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Adjacent same-sign corners connect along their shared edge; the diagonal of
// sign `diagonal_sign` connects through the cell interior (0: neither).
std::array<int, 4> corner_labels(const std::array<int, 4>& s, int diagonal_sign) {
  CornerSets sets;
  for (int k = 0; k < 4; ++k) {
    const int l = (k + 1) % 4;
    if (s[k] != 0 && s[k] == s[l]) sets.unite(k, l);
  }
  if (diagonal_sign != 0) {
    if (s[0] == diagonal_sign && s[2] == diagonal_sign) sets.unite(0, 2);
    if (s[1] == diagonal_sign && s[3] == diagonal_sign) sets.unite(1, 3);
  }
  std::array<int, 4> labels{};
  for (int k = 0; k < 4; ++k) labels[k] = s[k] == 0 ? -1 : sets.find(k);
  return labels;
}

class CellResolver {
 public:
  CellResolver(const Eigenfunction& f, double ztol, double singular_tol, int max_depth)
      : f_(f), ztol_(ztol), singular_tol_(singular_tol), max_depth_(max_depth) {}

  // Corner order: (x0,y0), (x0+h,y0), (x0+h,y0+h), (x0,y0+h).
  CellResolution resolve(double x0, double y0, double h, const std::array<double, 4>& v) {
    CellResolution out;
    std::array<int, 4> s{};
    for (int k = 0; k < 4; ++k) s[k] = sign_of(v[k], ztol_);

    // A saddle critical point inside the cell decides the pinch by its sign.
    if (auto crit = detail::newton_critical(f_, x0 + 0.5 * h, y0 + 0.5 * h, 0.5 * h)) {
      double cx = crit->point.x, cy = crit->point.y;
      if (domain_of(f_) == Domain::Torus) {
        // unwrap to the copy nearest the cell centre
        cx += std::round(x0 + 0.5 * h - cx);
        cy += std::round(y0 + 0.5 * h - cy);
      }
      const double margin = 1e-9 * h;
      const bool inside = cx >= x0 - margin && cx <= x0 + h + margin && cy >= y0 - margin &&
                          cy <= y0 + h + margin;
      const double value = crit->point.value;
      if (inside && std::abs(value) <= singular_tol_) {
        out.crossing = true;
        out.corner_class = corner_labels(s, 0);
        return out;
      }
      if (inside && crit->point.hessian_det < 0.0) {
        out.corner_class = corner_labels(s, value > 0.0 ? 1 : -1);
        return out;
      }
    }
    out.corner_class = subdivide(x0, y0, h, v, 1, out);
    return out;
  }

 private:
  std::array<int, 4> classify(double x0, double y0, double h, const std::array<double, 4>& v,
                              int depth, CellResolution& out) {
    std::array<int, 4> s{};
    for (int k = 0; k < 4; ++k) s[k] = sign_of(v[k], ztol_);
    if (!is_ambiguous(s)) return corner_labels(s, 0);
    if (depth >= max_depth_) {
      out.depth = std::max(out.depth, depth);
      const double c = evaluate(f_, x0 + 0.5 * h, y0 + 0.5 * h);
      if (std::abs(c) <= ztol_) {
        out.crossing = true;
        return corner_labels(s, 0);
      }
      if (std::abs(c) < 1e2 * ztol_) out.unresolved = true;
      return corner_labels(s, c > 0.0 ? 1 : -1);
    }
    return subdivide(x0, y0, h, v, depth, out);
  }

  std::array<int, 4> subdivide(double x0, double y0, double h, const std::array<double, 4>& v,
                               int depth, CellResolution& out) {
    out.depth = std::max(out.depth, depth);
    const double hh = 0.5 * h;
    // w[a][b] sits at (x0 + a*hh, y0 + b*hh).
    double w[3][3];
    w[0][0] = v[0];
    w[2][0] = v[1];
    w[2][2] = v[2];
    w[0][2] = v[3];
    w[1][0] = evaluate(f_, x0 + hh, y0);
    w[2][1] = evaluate(f_, x0 + h, y0 + hh);
    w[1][2] = evaluate(f_, x0 + hh, y0 + h);
    w[0][1] = evaluate(f_, x0, y0 + hh);
    w[1][1] = evaluate(f_, x0 + hh, y0 + hh);

    std::array<int, 9> parent{};
    for (int k = 0; k < 9; ++k) parent[k] = k;
    auto find = [&](int k) {
      while (parent[k] != k) k = parent[k] = parent[parent[k]];
      return k;
    };
    auto node = [](int a, int b) { return a * 3 + b; };
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const std::array<double, 4> sv{w[a][b], w[a + 1][b], w[a + 1][b + 1], w[a][b + 1]};
        const std::array<int, 4> ids{node(a, b), node(a + 1, b), node(a + 1, b + 1), node(a, b + 1)};
        const auto labels = classify(x0 + a * hh, y0 + b * hh, hh, sv, depth + 1, out);
        for (int k = 0; k < 4; ++k)
          for (int l = k + 1; l < 4; ++l)
            if (labels[k] >= 0 && labels[k] == labels[l]) parent[find(ids[k])] = find(ids[l]);
      }

    const std::array<int, 4> corner_ids{node(0, 0), node(2, 0), node(2, 2), node(0, 2)};
    std::array<int, 4> labels{};
    for (int k = 0; k < 4; ++k) {
      if (sign_of(v[k], ztol_) == 0) {
        labels[k] = -1;
        continue;
      }
      labels[k] = k;
      for (int l = 0; l < k; ++l)
        if (labels[l] >= 0 && find(corner_ids[l]) == find(corner_ids[k])) {
          labels[k] = labels[l];
          break;
        }
    }
    return labels;
  }

  const Eigenfunction& f_;
  double ztol_;
  double singular_tol_;
  int max_depth_;
};

}  // namespace

GridField sample_grid(const Eigenfunction& f, int resolution, const SamplingOptions& options) {
  if (resolution < 16)
    fail(ErrorCode::PreconditionViolation, "resolution must be >= 16, got " + std::to_string(resolution));
  const int floor_res = resolution_floor(f);
  if (!options.allow_coarse && resolution < floor_res)
    fail(ErrorCode::ResolutionTooCoarse, "resolution " + std::to_string(resolution) +
                                             " is below the wavelength floor " +
                                             std::to_string(floor_res));

  GridField g(f);
  g.kind = domain_of(f) == Domain::Square ? GridKind::SquareDirichlet : GridKind::TorusPeriodic;
  g.resolution = resolution;
  g.amplitude = amplitude_of(f);
  g.zero_tolerance = 1e-12 * g.amplitude;
  g.singular_tolerance = options.singular.tolerance * g.amplitude;

  std::vector<double> coords(resolution);
  for (int i = 0; i < resolution; ++i) coords[i] = g.coord(i);
  g.values = evaluate_grid(f, coords, coords);
  if (!g.periodic()) {
    for (int k = 0; k < resolution; ++k) {
      g.values[static_cast<std::size_t>(k) * resolution] = 0.0;
      g.values[static_cast<std::size_t>(k) * resolution + resolution - 1] = 0.0;
      g.values[k] = 0.0;
      g.values[static_cast<std::size_t>(resolution - 1) * resolution + k] = 0.0;
    }
  }

  g.singular_points = find_singular_points(f, resolution, options.singular);

  CellResolver resolver(f, g.zero_tolerance, g.singular_tolerance, options.max_depth);
  const double h = g.spacing();
  for (int i = g.first_cell(); i <= g.last_cell(); ++i)
    for (int j = g.first_cell(); j <= g.last_cell(); ++j) {
      const std::array<int, 4> s{g.sign_at(i, j), g.sign_at(i + 1, j), g.sign_at(i + 1, j + 1),
                                 g.sign_at(i, j + 1)};
      if (!is_ambiguous(s)) continue;
      const std::array<double, 4> v{g.at(i, j), g.at(i + 1, j), g.at(i + 1, j + 1), g.at(i, j + 1)};
      CellResolution r = resolver.resolve(i * h, j * h, h, v);
      r.i = i;
      r.j = j;
      g.refined_cells.push_back(r);
    }
  return g;
}

}  // namespace nodal_atlas::nodal
