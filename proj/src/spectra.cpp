#include "nodal_atlas/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "nodal_atlas/errors.hpp"

namespace nodal_atlas {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

std::string pair_string(int a, int b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

long isqrt(long n) {
  auto r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Number of (a,b) with a^2+b^2 <= limit, either over a,b >= 1 or over all of Z^2.
long count_lattice_points(long limit, bool positive_only) {
  if (limit < 0) return 0;
  long count = 0;
  const long r = isqrt(limit);
  for (long a = positive_only ? 1 : -r; a <= r; ++a) {
    const long rest = limit - a * a;
    const long bmax = isqrt(rest);
    count += positive_only ? bmax : 2 * bmax + 1;
  }
  return count;
}

bool representable(long m, bool positive_only) {
  if (m < 0) return false;
  const long r = isqrt(m);
  for (long a = positive_only ? 1 : 0; a <= r; ++a) {
    const long b = isqrt(m - a * a);
    if (b * b == m - a * a && (!positive_only || b >= 1)) return true;
  }
  return false;
}

}  // namespace

const char* to_string(Domain domain) noexcept {
  return domain == Domain::Square ? "square" : "torus";
}

// ---------------------------------------------------------------------------
// Square

SquareEigenfunction SquareEigenfunction::make(std::vector<SquareTerm> terms) {
  if (terms.empty()) fail(ErrorCode::EmptySpectrum, "no terms");
  const int m = terms.front().a * terms.front().a + terms.front().b * terms.front().b;
  std::set<std::pair<int, int>> seen;
  for (const auto& t : terms) {
    if (t.a < 1 || t.b < 1)
      fail(ErrorCode::InvalidInput, "square frequencies must be >= 1, got " + pair_string(t.a, t.b));
    if (t.a * t.a + t.b * t.b != m)
      fail(ErrorCode::MixedEigenvalue,
           pair_string(t.a, t.b) + " has a^2+b^2 = " + std::to_string(t.a * t.a + t.b * t.b) +
               ", expected " + std::to_string(m));
    if (!std::isfinite(t.coefficient)) fail(ErrorCode::InvalidInput, "non-finite coefficient");
    if (!seen.insert({t.a, t.b}).second)
      fail(ErrorCode::InvalidInput, "duplicate term " + pair_string(t.a, t.b));
  }
  std::erase_if(terms, [](const SquareTerm& t) { return t.coefficient == 0.0; });
  if (terms.empty()) fail(ErrorCode::EmptySpectrum, "all coefficients are zero");

  SquareEigenfunction f;
  f.m_ = m;
  f.terms_ = std::move(terms);
  f.amplitude_ = 0.0;
  for (const auto& t : f.terms_) f.amplitude_ += std::abs(t.coefficient);
  return f;
}

int SquareEigenfunction::max_a() const noexcept {
  int r = 0;
  for (const auto& t : terms_) r = std::max(r, t.a);
  return r;
}

int SquareEigenfunction::max_b() const noexcept {
  int r = 0;
  for (const auto& t : terms_) r = std::max(r, t.b);
  return r;
}

SquareEigenfunction SquareEigenfunction::normalized() const {
  // ||sin(pi a x) sin(pi b y)||^2 = 1/4 and distinct terms are orthogonal.
  double norm2 = 0.0;
  for (const auto& t : terms_) norm2 += 0.25 * t.coefficient * t.coefficient;
  const double scale = 1.0 / std::sqrt(norm2);
  auto terms = terms_;
  for (auto& t : terms) t.coefficient *= scale;
  return make(std::move(terms));
}

SquareEigenfunction deformation_family(int a, int b, double t) {
  if (a < 1 || b < 1 || a == b || std::gcd(a, b) != 1)
    fail(ErrorCode::InvalidPair, "deformation family needs distinct coprime a,b >= 1, got " +
                                     pair_string(a, b));
  std::vector<SquareTerm> terms{{a, b, 1.0}};
  if (t != 0.0) terms.push_back({b, a, t});
  return SquareEigenfunction::make(std::move(terms));
}

double evaluate(const SquareEigenfunction& f, double x, double y) {
  double s = 0.0;
  for (const auto& t : f.terms())
    s += t.coefficient * std::sin(kPi * t.a * x) * std::sin(kPi * t.b * y);
  return s;
}

std::array<double, 2> gradient(const SquareEigenfunction& f, double x, double y) {
  std::array<double, 2> g{0.0, 0.0};
  for (const auto& t : f.terms()) {
    const double ka = kPi * t.a, kb = kPi * t.b;
    g[0] += t.coefficient * ka * std::cos(ka * x) * std::sin(kb * y);
    g[1] += t.coefficient * kb * std::sin(ka * x) * std::cos(kb * y);
  }
  return g;
}

std::array<double, 3> hessian(const SquareEigenfunction& f, double x, double y) {
  std::array<double, 3> h{0.0, 0.0, 0.0};
  for (const auto& t : f.terms()) {
    const double ka = kPi * t.a, kb = kPi * t.b;
    const double sx = std::sin(ka * x), cx = std::cos(ka * x);
    const double sy = std::sin(kb * y), cy = std::cos(kb * y);
    h[0] -= t.coefficient * ka * ka * sx * sy;
    h[1] += t.coefficient * ka * kb * cx * cy;
    h[2] -= t.coefficient * kb * kb * sx * sy;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Torus

TorusEigenfunction TorusEigenfunction::make(std::vector<TorusTerm> terms) {
  if (terms.empty()) fail(ErrorCode::EmptySpectrum, "no terms");
  const int n = terms.front().a * terms.front().a + terms.front().b * terms.front().b;
  std::set<std::pair<int, int>> seen;
  double norm = 0.0;
  for (const auto& t : terms) {
    if (t.a * t.a + t.b * t.b != n)
      fail(ErrorCode::MixedEigenvalue,
           pair_string(t.a, t.b) + " has a^2+b^2 = " + std::to_string(t.a * t.a + t.b * t.b) +
               ", expected " + std::to_string(n));
    if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag()))
      fail(ErrorCode::InvalidInput, "non-finite coefficient");
    if (!seen.insert({t.a, t.b}).second)
      fail(ErrorCode::InvalidInput, "duplicate term " + pair_string(t.a, t.b));
    norm += std::norm(t.coefficient);
  }
  norm = std::sqrt(norm);
  if (norm == 0.0) fail(ErrorCode::EmptySpectrum, "all coefficients are zero");

  auto coefficient_at = [&](int a, int b) {
    for (const auto& t : terms)
      if (t.a == a && t.b == b) return t.coefficient;
    return std::complex<double>(0.0, 0.0);
  };
  for (const auto& t : terms) {
    const auto mirror = coefficient_at(-t.a, -t.b);
    if (std::abs(mirror - std::conj(t.coefficient)) > 1e-12 * norm)
      fail(ErrorCode::InvalidInput, "coefficients are not conjugate symmetric at " +
                                        pair_string(t.a, t.b));
  }
  std::erase_if(terms, [](const TorusTerm& t) { return t.coefficient == 0.0; });

  TorusEigenfunction f;
  f.n_ = n;
  f.terms_ = std::move(terms);
  std::sort(f.terms_.begin(), f.terms_.end(),
            [](const TorusTerm& l, const TorusTerm& r) { return std::pair(l.a, l.b) < std::pair(r.a, r.b); });
  f.amplitude_ = 0.0;
  for (const auto& t : f.terms_) f.amplitude_ += std::abs(t.coefficient);
  return f;
}

TorusEigenfunction TorusEigenfunction::plane_wave(int a, int b, double phase) {
  const auto c = 0.5 * std::polar(1.0, phase);
  if (a == 0 && b == 0) return make({{0, 0, std::complex<double>(std::cos(phase), 0.0)}});
  return make({{a, b, c}, {-a, -b, std::conj(c)}});
}

TorusEigenfunction TorusEigenfunction::sine_product(int a, int b) {
  // sin A sin B = (cos(A - B) - cos(A + B)) / 2
  if (a == 0 || b == 0) fail(ErrorCode::EmptySpectrum, "sin(0) factor vanishes identically");
  return make({{a, -b, 0.25}, {-a, b, 0.25}, {a, b, -0.25}, {-a, -b, -0.25}});
}

TorusEigenfunction TorusEigenfunction::cosine_product(int a, int b) {
  if (a == 0 && b == 0) return make({{0, 0, 1.0}});
  if (a == 0) return plane_wave(0, b);
  if (b == 0) return plane_wave(a, 0);
  return make({{a, -b, 0.25}, {-a, b, 0.25}, {a, b, 0.25}, {-a, -b, 0.25}});
}

double TorusEigenfunction::coefficient_norm() const noexcept {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.coefficient);
  return std::sqrt(s);
}

TorusEigenfunction TorusEigenfunction::normalized() const {
  const double scale = 1.0 / coefficient_norm();
  auto terms = terms_;
  for (auto& t : terms) t.coefficient *= scale;
  return make(std::move(terms));
}

namespace {

std::complex<double> torus_sum(const TorusEigenfunction& f, double x, double y) {
  std::complex<double> s{0.0, 0.0};
  for (const auto& t : f.terms())
    s += t.coefficient * std::polar(1.0, kTwoPi * (t.a * x + t.b * y));
  return s;
}

}  // namespace

double evaluate(const TorusEigenfunction& f, double x, double y) { return torus_sum(f, x, y).real(); }

double imaginary_residue(const TorusEigenfunction& f, double x, double y) {
  return torus_sum(f, x, y).imag();
}

std::array<double, 2> gradient(const TorusEigenfunction& f, double x, double y) {
  // d/dx Re(alpha e^{i theta}) = Re(alpha * i * 2 pi a * e^{i theta})
  std::array<double, 2> g{0.0, 0.0};
  for (const auto& t : f.terms()) {
    const auto w = t.coefficient * std::polar(1.0, kTwoPi * (t.a * x + t.b * y));
    g[0] -= kTwoPi * t.a * w.imag();
    g[1] -= kTwoPi * t.b * w.imag();
  }
  return g;
}

std::array<double, 3> hessian(const TorusEigenfunction& f, double x, double y) {
  std::array<double, 3> h{0.0, 0.0, 0.0};
  for (const auto& t : f.terms()) {
    const auto w = t.coefficient * std::polar(1.0, kTwoPi * (t.a * x + t.b * y));
    h[0] -= kTwoPi * kTwoPi * t.a * t.a * w.real();
    h[1] -= kTwoPi * kTwoPi * t.a * t.b * w.real();
    h[2] -= kTwoPi * kTwoPi * t.b * t.b * w.real();
  }
  return h;
}

// ---------------------------------------------------------------------------
// Variant dispatch

double evaluate(const Eigenfunction& f, double x, double y) {
  return std::visit([&](const auto& g) { return evaluate(g, x, y); }, f);
}

std::array<double, 2> gradient(const Eigenfunction& f, double x, double y) {
  return std::visit([&](const auto& g) { return gradient(g, x, y); }, f);
}

std::array<double, 3> hessian(const Eigenfunction& f, double x, double y) {
  return std::visit([&](const auto& g) { return hessian(g, x, y); }, f);
}

Jet jet(const Eigenfunction& f, double x, double y) {
  Jet j;
  if (const auto* sq = std::get_if<SquareEigenfunction>(&f)) {
    for (const auto& t : sq->terms()) {
      const double ka = kPi * t.a, kb = kPi * t.b;
      const double sx = std::sin(ka * x), cx = std::cos(ka * x);
      const double sy = std::sin(kb * y), cy = std::cos(kb * y);
      const double c = t.coefficient;
      j.value += c * sx * sy;
      j.grad[0] += c * ka * cx * sy;
      j.grad[1] += c * kb * sx * cy;
      j.hess[0] -= c * ka * ka * sx * sy;
      j.hess[1] += c * ka * kb * cx * cy;
      j.hess[2] -= c * kb * kb * sx * sy;
    }
  } else {
    const auto& tf = std::get<TorusEigenfunction>(f);
    for (const auto& t : tf.terms()) {
      const auto w = t.coefficient * std::polar(1.0, kTwoPi * (t.a * x + t.b * y));
      const double ka = kTwoPi * t.a, kb = kTwoPi * t.b;
      j.value += w.real();
      j.grad[0] -= ka * w.imag();
      j.grad[1] -= kb * w.imag();
      j.hess[0] -= ka * ka * w.real();
      j.hess[1] -= ka * kb * w.real();
      j.hess[2] -= kb * kb * w.real();
    }
  }
  return j;
}

Domain domain_of(const Eigenfunction& f) noexcept {
  return std::holds_alternative<SquareEigenfunction>(f) ? Domain::Square : Domain::Torus;
}

double lambda_of(const Eigenfunction& f) noexcept {
  return std::visit([](const auto& g) { return g.lambda(); }, f);
}

double amplitude_of(const Eigenfunction& f) noexcept {
  return std::visit([](const auto& g) { return g.amplitude(); }, f);
}

double frequency_scale(const Eigenfunction& f) noexcept { return std::sqrt(lambda_of(f)) / kPi; }

// ---------------------------------------------------------------------------
// Batch evaluation.  Each term factorizes into an x-table times a y-table, so
// a grid costs O(terms * (nx + ny)) trig calls plus O(terms * nx * ny) multiply-adds.

std::vector<double> evaluate_grid(const Eigenfunction& f, std::span<const double> xs,
                                  std::span<const double> ys) {
  const std::size_t nx = xs.size(), ny = ys.size();
  std::vector<double> out(nx * ny, 0.0);
  std::vector<double> tx(nx), ty(ny);
  if (const auto* sq = std::get_if<SquareEigenfunction>(&f)) {
    for (const auto& t : sq->terms()) {
      for (std::size_t i = 0; i < nx; ++i) tx[i] = t.coefficient * std::sin(kPi * t.a * xs[i]);
      for (std::size_t j = 0; j < ny; ++j) ty[j] = std::sin(kPi * t.b * ys[j]);
      for (std::size_t i = 0; i < nx; ++i) {
        double* row = out.data() + i * ny;
        for (std::size_t j = 0; j < ny; ++j) row[j] += tx[i] * ty[j];
      }
    }
    return out;
  }
  const auto& tf = std::get<TorusEigenfunction>(f);
  std::vector<std::complex<double>> cx(nx), cy(ny);
  for (const auto& t : tf.terms()) {
    for (std::size_t i = 0; i < nx; ++i) cx[i] = t.coefficient * std::polar(1.0, kTwoPi * t.a * xs[i]);
    for (std::size_t j = 0; j < ny; ++j) cy[j] = std::polar(1.0, kTwoPi * t.b * ys[j]);
    for (std::size_t i = 0; i < nx; ++i) {
      double* row = out.data() + i * ny;
      const double re = cx[i].real(), im = cx[i].imag();
      for (std::size_t j = 0; j < ny; ++j) row[j] += re * cy[j].real() - im * cy[j].imag();
    }
  }
  return out;
}

std::array<std::vector<double>, 2> gradient_grid(const Eigenfunction& f,
                                                 std::span<const double> xs,
                                                 std::span<const double> ys) {
  const std::size_t nx = xs.size(), ny = ys.size();
  std::array<std::vector<double>, 2> out{std::vector<double>(nx * ny, 0.0),
                                         std::vector<double>(nx * ny, 0.0)};
  if (const auto* sq = std::get_if<SquareEigenfunction>(&f)) {
    std::vector<double> sx(nx), cx(nx), sy(ny), cy(ny);
    for (const auto& t : sq->terms()) {
      const double ka = kPi * t.a, kb = kPi * t.b;
      for (std::size_t i = 0; i < nx; ++i) {
        sx[i] = std::sin(ka * xs[i]);
        cx[i] = std::cos(ka * xs[i]);
      }
      for (std::size_t j = 0; j < ny; ++j) {
        sy[j] = std::sin(kb * ys[j]);
        cy[j] = std::cos(kb * ys[j]);
      }
      for (std::size_t i = 0; i < nx; ++i) {
        double* gx = out[0].data() + i * ny;
        double* gy = out[1].data() + i * ny;
        const double ax = t.coefficient * ka * cx[i], ay = t.coefficient * kb * sx[i];
        for (std::size_t j = 0; j < ny; ++j) {
          gx[j] += ax * sy[j];
          gy[j] += ay * cy[j];
        }
      }
    }
    return out;
  }
  const auto& tf = std::get<TorusEigenfunction>(f);
  std::vector<std::complex<double>> ex(nx), ey(ny);
  for (const auto& t : tf.terms()) {
    for (std::size_t i = 0; i < nx; ++i) ex[i] = t.coefficient * std::polar(1.0, kTwoPi * t.a * xs[i]);
    for (std::size_t j = 0; j < ny; ++j) ey[j] = std::polar(1.0, kTwoPi * t.b * ys[j]);
    const double ka = kTwoPi * t.a, kb = kTwoPi * t.b;
    for (std::size_t i = 0; i < nx; ++i) {
      double* gx = out[0].data() + i * ny;
      double* gy = out[1].data() + i * ny;
      for (std::size_t j = 0; j < ny; ++j) {
        const double im = (ex[i] * ey[j]).imag();
        gx[j] -= ka * im;
        gy[j] -= kb * im;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral index

SpectralIndex spectral_index(double lambda, Domain domain) {
  const bool square = domain == Domain::Square;
  const double unit = square ? kPi * kPi : 4.0 * kPi * kPi;
  if (!std::isfinite(lambda) || lambda < 0.0)
    fail(ErrorCode::NotAnEigenvalue, "lambda must be finite and nonnegative");
  const double ratio = lambda / unit;
  const long k = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(k)) > 1e-9 * std::max(1.0, ratio) ||
      !representable(k, square))
    fail(ErrorCode::NotAnEigenvalue,
         std::string("lambda/") + (square ? "pi^2" : "(4 pi^2)") + " = " + std::to_string(ratio) +
             " is not a sum of two " + (square ? "positive " : "") + "squares");

  SpectralIndex idx;
  idx.lambda = lambda;
  idx.j_min = count_lattice_points(k - 1, square) + 1;
  idx.j_max = count_lattice_points(k, square);
  idx.weyl_estimate = lambda / (4.0 * kPi);
  return idx;
}

}  // namespace nodal_atlas
