#include "newton.hpp"

#include <cmath>

namespace nodal_atlas::nodal::detail {

std::optional<NewtonResult> newton_critical(const Eigenfunction& f, double x, double y,
                                            double max_step) {
  const bool square = domain_of(f) == Domain::Square;
  const double gscale = amplitude_of(f) * std::sqrt(lambda_of(f));
  const double gtol = 1e-13 * gscale;

  Jet j = jet(f, x, y);
  double gnorm = std::hypot(j.grad[0], j.grad[1]);
  for (int it = 0; it < 80 && gnorm > gtol; ++it) {
    const double hxx = j.hess[0], hxy = j.hess[1], hyy = j.hess[2];
    const double det = hxx * hyy - hxy * hxy;
    const double hnorm = std::abs(hxx) + std::abs(hxy) + std::abs(hyy);
    double dx, dy;
    if (std::abs(det) > 1e-12 * hnorm * hnorm) {
      dx = -(hyy * j.grad[0] - hxy * j.grad[1]) / det;
      dy = -(-hxy * j.grad[0] + hxx * j.grad[1]) / det;
    } else {
      // Degenerate Hessian (higher-order zero or inflection): gradient-norm descent.
      const double gx = hxx * j.grad[0] + hxy * j.grad[1];
      const double gy = hxy * j.grad[0] + hyy * j.grad[1];
      const double gg = gx * gx + gy * gy;
      if (gg == 0.0) break;
      const double s = (gnorm * gnorm) / (2.0 * gg);
      dx = -s * gx;
      dy = -s * gy;
    }
    const double len = std::hypot(dx, dy);
    if (len > max_step) {
      dx *= max_step / len;
      dy *= max_step / len;
    }
    // Backtrack until the gradient norm decreases.
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      const Jet trial = jet(f, x + dx, y + dy);
      const double tn = std::hypot(trial.grad[0], trial.grad[1]);
      if (tn < gnorm) {
        x += dx;
        y += dy;
        j = trial;
        gnorm = tn;
        accepted = true;
        break;
      }
      dx *= 0.5;
      dy *= 0.5;
    }
    if (!accepted) break;
    if (square && (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)) return std::nullopt;
  }
  if (gnorm > 1e-9 * gscale) return std::nullopt;
  if (!square) {
    x -= std::floor(x);
    y -= std::floor(y);
  }
  NewtonResult r;
  r.point.x = x;
  r.point.y = y;
  r.point.value = j.value;
  r.point.hessian_det = j.hess[0] * j.hess[2] - j.hess[1] * j.hess[1];
  r.gradient_norm = gnorm;
  return r;
}

}  // namespace nodal_atlas::nodal::detail
