#include <algorithm>
#include <map>
#include <string>
#include <tuple>

#include "nodal_atlas/errors.hpp"
#include "nodal_atlas/nodalgraph.hpp"
#include "nodal_atlas/topology.hpp"

namespace nodal_atlas::nodalgraph {

QuadSurface genus_surface(int genus) {
  if (genus < 0 || genus > 16) fail(ErrorCode::PreconditionViolation, "genus must lie in [0, 16]");
  // Slab of (2g+3) x 3 x 1 unit cubes; hole k removes the cube at (2+2k, 1).
  // Holes are separated by full cubes, so the boundary is a closed 2-manifold.
  const int W = 2 * genus + 3, H = 3;
  auto solid = [&](int x, int y, int z) {
    if (x < 0 || y < 0 || z != 0 || x >= W || y >= H) return false;
    return !(y == 1 && x >= 2 && x < 2 + 2 * genus && x % 2 == 0);
  };

  QuadSurface s;
  s.genus = genus;
  std::map<std::tuple<int, int, int>, int> vertex;
  std::map<std::pair<int, int>, int> edge;
  auto vid = [&](int x, int y, int z) {
    auto [it, fresh] = vertex.try_emplace({x, y, z}, s.vertex_count);
    if (fresh) ++s.vertex_count;
    return it->second;
  };
  auto eid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto [it, fresh] = edge.try_emplace(key, static_cast<int>(s.edges.size()));
    if (fresh) s.edges.push_back({key.first, key.second});
    return it->second;
  };

  // For each axis, the unit square orthogonal to it at the cube face.
  for (int x = 0; x < W; ++x)
    for (int y = 0; y < H; ++y) {
      if (!solid(x, y, 0)) continue;
      for (int axis = 0; axis < 3; ++axis)
        for (int side = 0; side < 2; ++side) {
          const int dx = axis == 0 ? (side ? 1 : -1) : 0;
          const int dy = axis == 1 ? (side ? 1 : -1) : 0;
          const int dz = axis == 2 ? (side ? 1 : -1) : 0;
          if (solid(x + dx, y + dy, dz)) continue;
          std::array<std::array<int, 3>, 4> c{};
          const int f = side;  // offset along the axis
          for (int k = 0; k < 4; ++k) {
            const int u = (k == 1 || k == 2) ? 1 : 0;
            const int v = (k >= 2) ? 1 : 0;
            std::array<int, 3> p{x, y, 0};
            if (axis == 0) p = {x + f, y + u, v};
            if (axis == 1) p = {x + u, y + f, v};
            if (axis == 2) p = {x + u, y + v, f};
            c[k] = p;
          }
          std::array<int, 4> q{};
          for (int k = 0; k < 4; ++k) q[k] = vid(c[k][0], c[k][1], c[k][2]);
          s.quads.push_back(q);
          std::array<int, 4> qe{};
          for (int k = 0; k < 4; ++k) qe[k] = eid(q[k], q[(k + 1) % 4]);
          s.quad_edges.push_back(qe);
        }
    }
  if (s.euler_characteristic() != 2 - 2L * genus)
    fail(ErrorCode::GraphInconsistency,
         "surface construction gave Euler characteristic " +
             std::to_string(s.euler_characteristic()) + " for genus " + std::to_string(genus));
  return s;
}

EmbeddedGraph random_subgraph(const QuadSurface& surface, double edge_probability,
                              double vertex_probability, std::mt19937_64& rng) {
  std::bernoulli_distribution keep_edge(edge_probability), keep_vertex(vertex_probability);
  std::vector<bool> in_vertex(surface.vertex_count, false), in_edge(surface.edges.size(), false);
  for (std::size_t e = 0; e < surface.edges.size(); ++e)
    if (keep_edge(rng)) {
      in_edge[e] = true;
      in_vertex[surface.edges[e][0]] = true;
      in_vertex[surface.edges[e][1]] = true;
    }
  for (int v = 0; v < surface.vertex_count; ++v)
    if (!in_vertex[v] && keep_vertex(rng)) in_vertex[v] = true;

  EmbeddedGraph g;
  g.genus = surface.genus;
  g.degrees = std::vector<int>();
  std::vector<int> degree(surface.vertex_count, 0);
  nodal::UnionFind comps(surface.vertex_count);
  for (std::size_t e = 0; e < surface.edges.size(); ++e) {
    if (!in_edge[e]) continue;
    ++g.e;
    ++degree[surface.edges[e][0]];
    ++degree[surface.edges[e][1]];
    comps.unite(surface.edges[e][0], surface.edges[e][1]);
  }
  std::vector<bool> root_seen(surface.vertex_count, false);
  for (int v = 0; v < surface.vertex_count; ++v) {
    if (!in_vertex[v]) continue;
    ++g.v;
    g.degrees->push_back(degree[v]);
    const auto r = comps.find(v);
    if (!root_seen[r]) {
      root_seen[r] = true;
      ++g.c;
    }
  }

  // Quads stay connected across every edge that is not in the graph.
  std::vector<std::vector<int>> quads_of_edge(surface.edges.size());
  for (std::size_t q = 0; q < surface.quads.size(); ++q)
    for (int e : surface.quad_edges[q]) quads_of_edge[e].push_back(static_cast<int>(q));
  nodal::UnionFind faces(surface.quads.size());
  for (std::size_t e = 0; e < surface.edges.size(); ++e) {
    if (in_edge[e]) continue;
    const auto& qs = quads_of_edge[e];
    for (std::size_t k = 1; k < qs.size(); ++k) faces.unite(qs[0], qs[k]);
  }
  g.f = 0;
  for (std::size_t q = 0; q < surface.quads.size(); ++q)
    if (faces.find(q) == q) ++g.f;
  return g;
}

}  // namespace nodal_atlas::nodalgraph
