// Graphs embedded on closed surfaces and the nodal graph of a torus
// eigenfunction: singular points are the vertices, nodal arcs between them
// the edges, nodal domains the faces.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "nodal_atlas/nodal.hpp"
#include "nodal_atlas/spectra.hpp"

namespace nodal_atlas::nodalgraph {

struct EmbeddedGraph {
  long v = 0;
  long e = 0;
  long f = 1;
  long c = 0;
  int genus = 0;
  std::optional<std::vector<int>> degrees;
};

struct EulerDefect {
  long defect = 0;   // v - e + f - c
  bool in_range = false;  // 1 - 2 genus <= defect <= 1
};

// Throws InvalidInput on negative counts, f < 1, an empty graph with f != 1,
// or degrees not summing to 2e.
void check_graph(const EmbeddedGraph& g);
EulerDefect euler_defect(const EmbeddedGraph& g);

struct NodalGraphReport {
  EmbeddedGraph graph;
  int N = 0;
  int C = 0;
  int order_sum = 0;  // sum over singular points of (ord - 1)
  long defect = 0;
  bool in_range = false;
  int resolution = 0;
  std::vector<nodal::SingularPoint> vertices;
};

struct GraphOptions {
  int resolution = 0;  // 0: default, raised until the grid step is <= r_min / 4
  int max_resolution = 2048;
  nodal::SingularOptions singular;
};

// Throws GraphInconsistency when any report invariant fails.
NodalGraphReport build_nodal_graph(const TorusEigenfunction& f, const GraphOptions& options = {});

// Asserts N = f, C = c, e - v = order_sum, N - C - order_sum = defect and the
// defect range.  Throws GraphInconsistency naming the first failure.
void validate(const NodalGraphReport& report);

struct SingularBudget {
  int order_sum = 0;
  long courant_cap = 0;  // N + 2 genus - 1
};

// Throws GraphInconsistency when order_sum exceeds the cap.
SingularBudget singular_budget(const NodalGraphReport& report, double lambda);

// Closed quadrilateral surface of genus g: the boundary of a one-voxel-thick
// slab with g isolated through-holes.
struct QuadSurface {
  int genus = 0;
  int vertex_count = 0;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 4>> quads;     // vertex ids, cyclic
  std::vector<std::array<int, 4>> quad_edges;  // edge ids of each quad
  long euler_characteristic() const {
    return vertex_count - static_cast<long>(edges.size()) + static_cast<long>(quads.size());
  }
};

QuadSurface genus_surface(int genus);

// A random subgraph of the surface's 1-skeleton: each edge kept with
// probability edge_probability (its endpoints come along), plus each remaining
// vertex kept with probability vertex_probability.  Faces are the components of
// the surface minus the graph.
EmbeddedGraph random_subgraph(const QuadSurface& surface, double edge_probability,
                              double vertex_probability, std::mt19937_64& rng);

}  // namespace nodal_atlas::nodalgraph
