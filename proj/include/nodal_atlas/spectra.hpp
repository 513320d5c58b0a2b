// Laplacian eigenfunctions on the unit square (Dirichlet) and the flat torus R^2/Z^2.
//
// A square eigenfunction is a finite sum
//     phi(x, y) = sum_k c_k sin(pi a_k x) sin(pi b_k y),   a_k^2 + b_k^2 = m,
// with eigenvalue lambda = pi^2 m.  A torus eigenfunction is a Fourier sum
//     phi(x, y) = sum_k alpha_k exp(2 pi i (a_k x + b_k y)),  a_k^2 + b_k^2 = n,
// with conjugate-symmetric coefficients and eigenvalue lambda = 4 pi^2 n.
//
// Everything here is evaluated from the exact trigonometric sums; there is no
// interpolation anywhere, so downstream zero counting has a sharp reference.
#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

namespace nodal_atlas {

inline constexpr double kPi = std::numbers::pi;

// Reference constants for N/j ratio tables.
inline constexpr double kPolterovichConstant = 0.6366197724;  // 2/pi
inline constexpr double kPleijelConstant = 0.6916602761;      // (2/j_{0,1})^2
inline constexpr double kBesselJ0FirstZero = 2.404825557695773;
inline constexpr double kBourgainImprovement = 3e-9;  // display only

enum class Domain { Square, Torus };

const char* to_string(Domain domain) noexcept;

struct SquareTerm {
  int a = 1;
  int b = 1;
  double coefficient = 0.0;
};

class SquareEigenfunction {
 public:
  // Validates and drops zero coefficients.  Throws MixedEigenvalue,
  // EmptySpectrum, InvalidInput (a or b < 1, duplicate pairs).
  static SquareEigenfunction make(std::vector<SquareTerm> terms);

  int m() const noexcept { return m_; }
  double lambda() const noexcept { return kPi * kPi * m_; }
  const std::vector<SquareTerm>& terms() const noexcept { return terms_; }

  // Upper bound for |phi| (sum of |c_k|); the unit for all value tolerances.
  double amplitude() const noexcept { return amplitude_; }
  int max_a() const noexcept;
  int max_b() const noexcept;

  // Rescaled to unit L^2 norm on [0,1]^2.
  SquareEigenfunction normalized() const;

 private:
  SquareEigenfunction() = default;
  int m_ = 0;
  double amplitude_ = 0.0;
  std::vector<SquareTerm> terms_;
};

struct TorusTerm {
  int a = 0;
  int b = 0;
  std::complex<double> coefficient;
};

class TorusEigenfunction {
 public:
  // Validates a^2+b^2 constant, conjugate symmetry alpha(-a,-b) = conj(alpha(a,b)),
  // and a nonzero coefficient.  Zero coefficients are dropped.
  static TorusEigenfunction make(std::vector<TorusTerm> terms);

  // cos(2 pi (a x + b y) + phase)
  static TorusEigenfunction plane_wave(int a, int b, double phase = 0.0);
  // sin(2 pi a x) sin(2 pi b y)
  static TorusEigenfunction sine_product(int a, int b);
  // cos(2 pi a x) cos(2 pi b y)
  static TorusEigenfunction cosine_product(int a, int b);

  int n() const noexcept { return n_; }
  double lambda() const noexcept { return 4.0 * kPi * kPi * n_; }
  const std::vector<TorusTerm>& terms() const noexcept { return terms_; }
  double amplitude() const noexcept { return amplitude_; }
  double coefficient_norm() const noexcept;

  TorusEigenfunction normalized() const;

 private:
  TorusEigenfunction() = default;
  int n_ = 0;
  double amplitude_ = 0.0;
  std::vector<TorusTerm> terms_;
};

using Eigenfunction = std::variant<SquareEigenfunction, TorusEigenfunction>;

// sin(pi a x) sin(pi b y) + t sin(pi b x) sin(pi a y); requires a != b, gcd(a,b) = 1.
SquareEigenfunction deformation_family(int a, int b, double t);

double evaluate(const SquareEigenfunction& f, double x, double y);
double evaluate(const TorusEigenfunction& f, double x, double y);
double evaluate(const Eigenfunction& f, double x, double y);

// Imaginary part of the torus Fourier sum; zero up to rounding when the
// coefficients are conjugate symmetric.
double imaginary_residue(const TorusEigenfunction& f, double x, double y);

std::array<double, 2> gradient(const SquareEigenfunction& f, double x, double y);
std::array<double, 2> gradient(const TorusEigenfunction& f, double x, double y);
std::array<double, 2> gradient(const Eigenfunction& f, double x, double y);

// Second derivatives {f_xx, f_xy, f_yy}.
std::array<double, 3> hessian(const SquareEigenfunction& f, double x, double y);
std::array<double, 3> hessian(const TorusEigenfunction& f, double x, double y);
std::array<double, 3> hessian(const Eigenfunction& f, double x, double y);

// Value, gradient and Hessian in one pass.
struct Jet {
  double value = 0.0;
  std::array<double, 2> grad{};
  std::array<double, 3> hess{};
};
Jet jet(const Eigenfunction& f, double x, double y);

Domain domain_of(const Eigenfunction& f) noexcept;
double lambda_of(const Eigenfunction& f) noexcept;
double amplitude_of(const Eigenfunction& f) noexcept;
// sqrt(lambda)/pi: the number of half-wavelengths across the unit interval.
double frequency_scale(const Eigenfunction& f) noexcept;

// Batch evaluation on a tensor grid, values[i * ys.size() + j] = phi(xs[i], ys[j]).
std::vector<double> evaluate_grid(const Eigenfunction& f, std::span<const double> xs,
                                  std::span<const double> ys);
// Same layout; component 0 is d/dx, component 1 is d/dy.
std::array<std::vector<double>, 2> gradient_grid(const Eigenfunction& f,
                                                 std::span<const double> xs,
                                                 std::span<const double> ys);

struct SpectralIndex {
  double lambda = 0.0;
  long j_min = 0;
  long j_max = 0;
  double weyl_estimate = 0.0;
};

// Exact position of lambda in the ordered spectrum, counted with multiplicity.
// On the torus the constant eigenfunction (lambda = 0) is j = 1.
SpectralIndex spectral_index(double lambda, Domain domain);

}  // namespace nodal_atlas
