#include <doctest.h>

#include <random>

#include "nodal_atlas/errors.hpp"
#include "nodal_atlas/nodalgraph.hpp"
#include "nodal_atlas/spectra.hpp"

using namespace nodal_atlas;
using namespace nodal_atlas::nodalgraph;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const AtlasError& e) {
    return e.code();
  }
  FAIL("expected an AtlasError");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("euler defect of hand-built embeddings") {
  const auto tet = euler_defect({4, 6, 4, 1, 0, std::nullopt});
  CHECK(tet.defect == 1);
  CHECK(tet.in_range);

  const auto loop = euler_defect({1, 1, 1, 1, 1, std::nullopt});
  CHECK(loop.defect == 0);
  CHECK(loop.in_range);

  const auto empty = euler_defect({0, 0, 1, 0, 2, std::nullopt});
  CHECK(empty.defect == 1);
  CHECK(empty.in_range);

  CHECK_FALSE(euler_defect({10, 0, 1, 0, 0, std::nullopt}).in_range);
  CHECK(code_of([] { euler_defect({-1, 0, 1, 0, 0, std::nullopt}); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { euler_defect({0, 0, 2, 0, 0, std::nullopt}); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { euler_defect({2, 1, 1, 1, 0, std::vector<int>{1, 2}}); }) ==
        ErrorCode::InvalidInput);
}

TEST_CASE("nodal graph of sin(2 pi x) sin(2 pi y)") {
  const auto r = build_nodal_graph(TorusEigenfunction::sine_product(1, 1));
  CHECK(r.graph.v == 4);
  CHECK(r.graph.e == 8);
  CHECK(r.graph.f == 4);
  CHECK(r.graph.c == 1);
  CHECK(r.order_sum == 4);
  CHECK(r.defect == -1);
  CHECK(r.N - r.C - r.order_sum == r.defect);
  REQUIRE(r.graph.degrees);
  for (int d : *r.graph.degrees) CHECK(d == 4);

  const auto b = singular_budget(r, 8 * kPi * kPi);
  CHECK(b.order_sum == 4);
  CHECK(b.courant_cap == 5);
}

TEST_CASE("nodal graph of a plane wave") {
  const auto r = build_nodal_graph(TorusEigenfunction::plane_wave(1, 2));
  CHECK(r.graph.v == 0);
  CHECK(r.graph.e == 0);
  CHECK(r.graph.f == 2);
  CHECK(r.graph.c == 2);
  CHECK(r.order_sum == 0);
  CHECK(r.defect == 0);
  CHECK(singular_budget(r, 20 * kPi * kPi).order_sum == 0);
}

TEST_CASE("products on the torus") {
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b) {
      const auto r = build_nodal_graph(TorusEigenfunction::sine_product(a, b));
      // 2a vertical and 2b horizontal circles crossing in 4ab points
      CHECK(r.graph.v == 4 * a * b);
      CHECK(r.graph.e == 8 * a * b);
      CHECK(r.N == 4 * a * b);
      CHECK(r.C == 1);
      CHECK(r.defect == -1);
    }
  const auto c = build_nodal_graph(TorusEigenfunction::cosine_product(1, 1));
  CHECK(c.graph.v == 4);
  CHECK(c.defect == -1);
}

TEST_CASE("tampered reports are rejected") {
  auto r = build_nodal_graph(TorusEigenfunction::sine_product(1, 1));
  auto bad = r;
  bad.order_sum = 3;
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::GraphInconsistency);
  bad = r;
  bad.N = 5;
  CHECK(code_of([&] { validate(bad); }) == ErrorCode::GraphInconsistency);

  auto greedy = r;
  greedy.order_sum = 10;
  CHECK(code_of([&] { singular_budget(greedy, 8 * kPi * kPi); }) == ErrorCode::GraphInconsistency);
}

TEST_CASE("genus surfaces") {
  for (int g = 0; g <= 5; ++g) {
    const auto s = genus_surface(g);
    CHECK(s.euler_characteristic() == 2 - 2 * g);
    CHECK(s.quads.size() == s.quad_edges.size());
    // every edge borders exactly two quads
    std::vector<int> uses(s.edges.size(), 0);
    for (const auto& q : s.quad_edges)
      for (int e : q) ++uses[e];
    for (int u : uses) CHECK(u == 2);
  }
  CHECK(code_of([] { genus_surface(-1); }) == ErrorCode::PreconditionViolation);
}

TEST_CASE("random subgraphs") {
  std::mt19937_64 rng(5);
  for (int g = 0; g <= 3; ++g) {
    const auto s = genus_surface(g);
    const auto full = random_subgraph(s, 1.0, 0.0, rng);
    CHECK(full.v == s.vertex_count);
    CHECK(full.e == static_cast<long>(s.edges.size()));
    CHECK(full.f == static_cast<long>(s.quads.size()));
    CHECK(full.c == 1);
    CHECK(euler_defect(full).defect == 1 - 2 * g);

    const auto none = random_subgraph(s, 0.0, 0.0, rng);
    CHECK(none.v == 0);
    CHECK(none.f == 1);
    CHECK(euler_defect(none).defect == 1);

    // isolated vertices only: each is its own component and face count stays 1
    const auto dots = random_subgraph(s, 0.0, 1.0, rng);
    CHECK(dots.v == s.vertex_count);
    CHECK(dots.c == s.vertex_count);
    CHECK(dots.f == 1);

    for (int t = 0; t < 500; ++t) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const auto sub = random_subgraph(s, u(rng), 0.3 * u(rng), rng);
      CHECK(euler_defect(sub).in_range);
    }
  }
}
