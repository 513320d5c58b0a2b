#include "nodal_atlas/nodalgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nodal_atlas/errors.hpp"
#include "nodal_atlas/topology.hpp"

namespace nodal_atlas::nodalgraph {

void check_graph(const EmbeddedGraph& g) {
  if (g.v < 0 || g.e < 0 || g.c < 0 || g.genus < 0)
    fail(ErrorCode::InvalidInput, "graph counts must be nonnegative");
  if (g.f < 1) fail(ErrorCode::InvalidInput, "a graph on a closed surface has at least one face");
  if (g.v == 0 && g.e == 0 && g.c == 0 && g.f != 1)
    fail(ErrorCode::InvalidInput, "the empty graph has exactly one face");
  if (g.degrees) {
    const long sum = std::accumulate(g.degrees->begin(), g.degrees->end(), 0L);
    if (sum != 2 * g.e)
      fail(ErrorCode::InvalidInput, "degree sum " + std::to_string(sum) + " != 2e = " +
                                        std::to_string(2 * g.e));
  }
}

EulerDefect euler_defect(const EmbeddedGraph& g) {
  check_graph(g);
  EulerDefect d;
  d.defect = g.v - g.e + g.f - g.c;
  d.in_range = d.defect <= 1 && d.defect >= 1 - 2L * g.genus;
  return d;
}

namespace {

[[noreturn]] void inconsistent(const std::string& what) {
  fail(ErrorCode::GraphInconsistency, what);
}

}  // namespace

void validate(const NodalGraphReport& r) {
  const auto& g = r.graph;
  if (g.degrees) {
    const long sum = std::accumulate(g.degrees->begin(), g.degrees->end(), 0L);
    if (sum != 2 * g.e)
      inconsistent("degree sum " + std::to_string(sum) + " != 2e = " + std::to_string(2 * g.e));
  }
  if (r.N != g.f) inconsistent("N != f");
  if (r.C != g.c) inconsistent("C != c");
  if (g.e - g.v != r.order_sum)
    inconsistent("e - v = " + std::to_string(g.e - g.v) + " but the order sum is " +
                 std::to_string(r.order_sum));
  const long defect = g.v - g.e + g.f - g.c;
  if (defect != r.defect) inconsistent("stored defect disagrees with v - e + f - c");
  if (r.N - r.C - r.order_sum != r.defect)
    inconsistent("N - C - order_sum = " + std::to_string(r.N - r.C - r.order_sum) +
                 " but v - e + f - c = " + std::to_string(r.defect));
  if (r.defect > 1 || r.defect < 1 - 2L * g.genus)
    inconsistent("defect " + std::to_string(r.defect) + " outside [1 - 2 genus, 1]");
}

NodalGraphReport build_nodal_graph(const TorusEigenfunction& f, const GraphOptions& options) {
  const Eigenfunction ef = f;
  int res = options.resolution > 0 ? options.resolution : nodal::default_resolution(ef);
  const auto singular = nodal::find_singular_points(ef, res, options.singular);
  double r_min = 1.0;
  for (const auto& s : singular) r_min = std::min(r_min, s.radius);
  while (1.0 / res > r_min / 4.0 && res < options.max_resolution) res *= 2;
  res = std::min(res, std::max(options.max_resolution, options.resolution));

  nodal::SamplingOptions sampling;
  sampling.singular = options.singular;
  sampling.allow_coarse = options.resolution > 0;
  const auto grid = nodal::sample_grid(ef, res, sampling);
  const nodal::NodalTopology topo(grid);

  NodalGraphReport r;
  r.resolution = res;
  r.vertices = grid.singular_points;
  r.N = topo.domain_count();
  r.C = topo.component_count();

  std::vector<nodal::Disk> disks;
  for (const auto& s : grid.singular_points) {
    if (s.radius < 1.5 * grid.spacing())
      inconsistent("singular point at (" + std::to_string(s.x) + ", " + std::to_string(s.y) +
                   ") too close to other critical points for resolution " + std::to_string(res));
    disks.push_back({s.x, s.y, s.radius});
  }
  const auto split = topo.split_at(disks);

  std::vector<int> degrees;
  for (std::size_t d = 0; d < disks.size(); ++d) {
    const int deg = static_cast<int>(split.crossing_arcs[d].size());
    const int ord = grid.singular_points[d].order;
    if (deg != 2 * ord)
      inconsistent("vertex " + std::to_string(d) + " has " + std::to_string(deg) +
                   " arcs but order " + std::to_string(ord));
    if (std::find(split.crossing_arcs[d].begin(), split.crossing_arcs[d].end(), -1) !=
        split.crossing_arcs[d].end())
      inconsistent("vertex " + std::to_string(d) + " has an arc with no traced nodal points");
    degrees.push_back(deg);
    r.order_sum += ord - 1;
  }
  long edges = 0;
  for (int a = 0; a < split.arc_count; ++a) {
    const auto n = split.contacts[a].size();
    if (n == 0) continue;
    if (n != 2)
      inconsistent("nodal arc " + std::to_string(a) + " meets vertices " + std::to_string(n) +
                   " times");
    ++edges;
  }

  r.graph.v = static_cast<long>(disks.size());
  r.graph.e = edges;
  r.graph.f = r.N;
  r.graph.c = r.C;
  r.graph.genus = 1;
  r.graph.degrees = std::move(degrees);
  r.defect = r.graph.v - r.graph.e + r.graph.f - r.graph.c;
  r.in_range = r.defect <= 1 && r.defect >= -1;
  validate(r);
  return r;
}

SingularBudget singular_budget(const NodalGraphReport& report, double lambda) {
  if (!(lambda > 0.0)) fail(ErrorCode::PreconditionViolation, "lambda must be positive");
  SingularBudget b;
  b.order_sum = report.order_sum;
  b.courant_cap = report.N + 2L * report.graph.genus - 1;
  if (b.order_sum > b.courant_cap)
    inconsistent("order sum " + std::to_string(b.order_sum) + " exceeds the cap " +
                 std::to_string(b.courant_cap));
  return b;
}

}  // namespace nodal_atlas::nodalgraph
