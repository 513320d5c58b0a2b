#include <doctest.h>

#include <cmath>
#include <random>

#include "nodal_atlas/errors.hpp"
#include "nodal_atlas/spectra.hpp"

using namespace nodal_atlas;

namespace {

// Eigenvalues below / up to m by brute enumeration of positive pairs.
SpectralIndex brute_square_index(long m) {
  SpectralIndex r;
  long below = 0, upto = 0;
  for (long a = 1; a * a < m + 1; ++a)
    for (long b = 1; a * a + b * b <= m; ++b) {
      ++upto;
      if (a * a + b * b < m) ++below;
    }
  r.j_min = below + 1;
  r.j_max = upto;
  return r;
}

SpectralIndex brute_torus_index(long n) {
  SpectralIndex r;
  long below = 0, upto = 0;
  for (long a = -n; a <= n; ++a)
    for (long b = -n; b <= n; ++b) {
      const long s = a * a + b * b;
      if (s <= n) ++upto;
      if (s < n) ++below;
    }
  r.j_min = below + 1;
  r.j_max = upto;
  return r;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const AtlasError& e) {
    return e.code();
  }
  FAIL("expected an AtlasError");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("square construction") {
  auto f = SquareEigenfunction::make({{3, 3, 1.0}});
  CHECK(f.m() == 18);
  CHECK(f.lambda() == doctest::Approx(177.653).epsilon(1e-5));

  auto g = SquareEigenfunction::make({{1, 2, 1.0}, {2, 1, 0.5}});
  CHECK(g.m() == 5);
  CHECK(g.lambda() == doctest::Approx(5 * kPi * kPi));
  CHECK(g.amplitude() == doctest::Approx(1.5));

  CHECK(code_of([] { SquareEigenfunction::make({{1, 2, 1.0}, {1, 3, 1.0}}); }) ==
        ErrorCode::MixedEigenvalue);
  CHECK(code_of([] { SquareEigenfunction::make({}); }) == ErrorCode::EmptySpectrum);
  CHECK(code_of([] { SquareEigenfunction::make({{1, 1, 0.0}}); }) == ErrorCode::EmptySpectrum);
  CHECK(code_of([] { SquareEigenfunction::make({{0, 2, 1.0}}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("deformation family") {
  auto f0 = deformation_family(1, 3, 0.0);
  CHECK(f0.terms().size() == 1);
  CHECK(f0.m() == 10);
  auto f1 = deformation_family(1, 3, 1.0);
  CHECK(f1.terms().size() == 2);
  CHECK(f1.terms()[0].coefficient == f1.terms()[1].coefficient);
  CHECK(code_of([] { deformation_family(2, 2, 0.5); }) == ErrorCode::InvalidPair);
  CHECK(code_of([] { deformation_family(2, 4, 0.5); }) == ErrorCode::InvalidPair);
}

TEST_CASE("torus construction") {
  auto f = TorusEigenfunction::plane_wave(1, 2);
  CHECK(f.n() == 5);
  CHECK(f.lambda() == doctest::Approx(20 * kPi * kPi));
  // conjugate symmetry is required
  CHECK(code_of([] {
          TorusEigenfunction::make({{1, 0, {1.0, 0.0}}, {-1, 0, {0.5, 0.0}}});
        }) == ErrorCode::InvalidInput);
  CHECK(code_of([] {
          TorusEigenfunction::make({{1, 0, {0.5, 0.0}}, {-1, 0, {0.5, 0.0}}, {1, 1, {0.5, 0.0}},
                                    {-1, -1, {0.5, 0.0}}});
        }) == ErrorCode::MixedEigenvalue);
}

TEST_CASE("pointwise values") {
  auto f = SquareEigenfunction::make({{3, 3, 1.0}});
  CHECK(evaluate(f, 1.0 / 6, 1.0 / 6) == doctest::Approx(1.0));
  for (double y : {0.1, 0.37, 0.8}) CHECK(std::abs(evaluate(f, 1.0 / 3, y)) < 1e-14);

  auto g = TorusEigenfunction::plane_wave(1, 2);
  CHECK(evaluate(g, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(evaluate(g, 0.3, 0.1) == doctest::Approx(std::cos(2 * kPi * 0.5)));
  CHECK(std::abs(imaginary_residue(g, 0.3, 0.1)) < 1e-14);

  auto s = TorusEigenfunction::sine_product(2, 3);
  CHECK(evaluate(s, 0.1, 0.2) ==
        doctest::Approx(std::sin(4 * kPi * 0.1) * std::sin(6 * kPi * 0.2)));
  auto c = TorusEigenfunction::cosine_product(1, 2);
  CHECK(evaluate(c, 0.1, 0.2) ==
        doctest::Approx(std::cos(2 * kPi * 0.1) * std::cos(4 * kPi * 0.2)));
}

TEST_CASE("gradients") {
  auto ground = SquareEigenfunction::make({{1, 1, 1.0}});
  auto g0 = gradient(ground, 0.5, 0.5);
  CHECK(std::abs(g0[0]) < 1e-14);
  CHECK(std::abs(g0[1]) < 1e-14);

  auto s = TorusEigenfunction::sine_product(1, 1);
  auto gs = gradient(s, 0.0, 0.0);
  CHECK(std::abs(gs[0]) < 1e-12);
  CHECK(std::abs(gs[1]) < 1e-12);
  CHECK(std::abs(evaluate(s, 0.0, 0.0)) < 1e-14);

  auto c = TorusEigenfunction::plane_wave(1, 0);
  auto gc = gradient(c, 0.25, 0.7);
  CHECK(gc[0] == doctest::Approx(-2 * kPi));
  CHECK(std::abs(gc[1]) < 1e-12);
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const Eigenfunction fs[] = {
      SquareEigenfunction::make({{1, 7, 0.3}, {7, 1, -1.2}, {5, 5, 0.8}}),
      TorusEigenfunction::make({{3, 4, {0.2, 0.1}}, {-3, -4, {0.2, -0.1}}, {5, 0, {0.0, 0.4}},
                                {-5, 0, {0.0, -0.4}}}),
  };
  const double h = 1e-6;
  for (const auto& f : fs)
    for (int k = 0; k < 50; ++k) {
      const double x = u(rng), y = u(rng);
      const auto g = gradient(f, x, y);
      const double dx = (evaluate(f, x + h, y) - evaluate(f, x - h, y)) / (2 * h);
      const double dy = (evaluate(f, x, y + h) - evaluate(f, x, y - h)) / (2 * h);
      const double scale = amplitude_of(f) * std::sqrt(lambda_of(f));
      CHECK(std::abs(g[0] - dx) < 1e-6 * scale);
      CHECK(std::abs(g[1] - dy) < 1e-6 * scale);
    }
}

TEST_CASE("eigenfunction property on random points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigenfunction fs[] = {
      SquareEigenfunction::make({{1, 8, 1.0}, {8, 1, 0.4}, {4, 7, -0.9}, {7, 4, 0.25}}),
      TorusEigenfunction::make({{1, 2, {0.3, 0.2}}, {-1, -2, {0.3, -0.2}}, {2, -1, {1.0, 0.0}},
                                {-2, 1, {1.0, 0.0}}}),
  };
  for (const auto& f : fs) {
    const double lambda = lambda_of(f);
    for (int k = 0; k < 1000; ++k) {
      const double x = u(rng), y = u(rng);
      const auto hs = hessian(f, x, y);
      const double lap = -(hs[0] + hs[2]);
      CHECK(std::abs(lap - lambda * evaluate(f, x, y)) <= 1e-10 * lambda * amplitude_of(f));
    }
  }
}

TEST_CASE("jet agrees with the separate evaluators") {
  const Eigenfunction f = SquareEigenfunction::make({{2, 9, 1.0}, {6, 7, -0.5}, {9, 2, 0.7}});
  const auto j = jet(f, 0.31, 0.77);
  CHECK(j.value == doctest::Approx(evaluate(f, 0.31, 0.77)));
  CHECK(j.grad[0] == doctest::Approx(gradient(f, 0.31, 0.77)[0]));
  CHECK(j.hess[1] == doctest::Approx(hessian(f, 0.31, 0.77)[1]));
}

TEST_CASE("spectral index") {
  auto g = spectral_index(2 * kPi * kPi, Domain::Square);
  CHECK(g.j_min == 1);
  CHECK(g.j_max == 1);
  auto five = spectral_index(5 * kPi * kPi, Domain::Square);
  CHECK(five.j_min == 2);
  CHECK(five.j_max == 3);
  auto e = spectral_index(18 * kPi * kPi, Domain::Square);
  CHECK(e.weyl_estimate == doctest::Approx(18 * kPi / 4));

  for (long m = 2; m <= 800; ++m) {
    const auto brute = brute_square_index(m);
    if (brute.j_max < brute.j_min) {
      CHECK(code_of([&] { spectral_index(m * kPi * kPi, Domain::Square); }) ==
            ErrorCode::NotAnEigenvalue);
      continue;
    }
    const auto idx = spectral_index(m * kPi * kPi, Domain::Square);
    CHECK(idx.j_min == brute.j_min);
    CHECK(idx.j_max == brute.j_max);
  }
  for (long n = 0; n <= 200; ++n) {
    const auto brute = brute_torus_index(n);
    if (brute.j_max < brute.j_min) continue;
    const auto idx = spectral_index(4 * kPi * kPi * n, Domain::Torus);
    CHECK(idx.j_min == brute.j_min);
    CHECK(idx.j_max == brute.j_max);
  }
  CHECK(code_of([] { spectral_index(3 * kPi * kPi, Domain::Square); }) ==
        ErrorCode::NotAnEigenvalue);
}

TEST_CASE("normalization") {
  auto f = SquareEigenfunction::make({{1, 2, 3.0}, {2, 1, 4.0}});
  auto g = f.normalized();
  // each sin sin term has L2 norm 1/2 and they are orthogonal
  double sum = 0.0;
  for (const auto& t : g.terms()) sum += t.coefficient * t.coefficient / 4.0;
  CHECK(sum == doctest::Approx(1.0));
}
