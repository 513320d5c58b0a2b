#include "nodal_atlas/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nodal_atlas/errors.hpp"

namespace nodal_atlas::nodal {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

namespace {

struct CycleItem {
  bool nodal = false;
  int point = -1;   // nodal items
  int corner = -1;  // corner items (nodal zero corners too)
};

}  // namespace

NodalTopology::NodalTopology(const GridField& grid) : grid_(&grid) {
  const int res = grid.resolution;
  const std::size_t nodes = static_cast<std::size_t>(res) * res;
  compact_.assign(3 * nodes, -1);

  for (const auto& r : grid.refined_cells)
    if (r.unresolved)
      fail(ErrorCode::UnresolvedAmbiguity,
           "cell (" + std::to_string(r.i) + ", " + std::to_string(r.j) +
               ") stays ambiguous after subdivision to depth " + std::to_string(r.depth));

  std::vector<int> resolution_of(nodes, -1);
  for (std::size_t k = 0; k < grid.refined_cells.size(); ++k) {
    const auto& r = grid.refined_cells[k];
    resolution_of[static_cast<std::size_t>(grid.wrap(r.i)) * res + grid.wrap(r.j)] =
        static_cast<int>(k);
  }

  UnionFind domains(nodes);
  for (int i = grid.first_cell(); i <= grid.last_cell(); ++i)
    for (int j = grid.first_cell(); j <= grid.last_cell(); ++j) {
      const int idx = resolution_of[static_cast<std::size_t>(i) * res + j];
      process_cell(i, j, idx >= 0 ? &grid.refined_cells[idx] : nullptr, domains);
    }

  UnionFind points(positions_.size());
  for (const auto& [a, b] : links_) points.unite(a, b);

  touches_boundary_.clear();
  if (!grid.periodic()) walk_boundary_ring(points);

  component_.assign(positions_.size(), -1);
  std::vector<int> root_label(positions_.size(), -1);
  for (std::size_t p = 0; p < positions_.size(); ++p) {
    const std::size_t r = points.find(p);
    if (root_label[r] < 0) root_label[r] = component_count_++;
    component_[p] = root_label[r];
  }
  touches_boundary_.assign(component_count_, false);
  for (int p : endpoint_points_) touches_boundary_[component_[p]] = true;

  domain_label_.assign(nodes, -1);
  std::vector<int> domain_root(nodes, -1);
  const int lo = grid.periodic() ? 0 : 1;
  const int hi = grid.periodic() ? res - 1 : res - 2;
  for (int i = lo; i <= hi; ++i)
    for (int j = lo; j <= hi; ++j) {
      if (grid.sign_at(i, j) == 0) continue;
      const std::size_t k = static_cast<std::size_t>(i) * res + j;
      const std::size_t r = domains.find(k);
      if (domain_root[r] < 0) domain_root[r] = domain_count_++;
      domain_label_[k] = domain_root[r];
    }
}

int NodalTopology::point_id(int raw) {
  int& id = compact_[raw];
  if (id < 0) {
    id = static_cast<int>(raw_.size());
    raw_.push_back(raw);
    positions_.push_back(raw_position(raw));
  }
  return id;
}

// Raw id of the grid edge between two 4-adjacent nodes (wrapped indices).
int NodalTopology::edge_raw(int i0, int j0, int i1, int j1) const {
  const int res = grid_->resolution;
  const int nodes = res * res;
  if (j0 == j1) {
    // x-direction: the lower node is the one whose successor is the other.
    const int lower = grid_->wrap(i0 + 1) == i1 ? i0 : i1;
    return nodes + lower * res + j0;
  }
  const int lower = grid_->wrap(j0 + 1) == j1 ? j0 : j1;
  return 2 * nodes + i0 * res + lower;
}

std::array<double, 2> NodalTopology::raw_position(int raw) const {
  const int res = grid_->resolution;
  const int nodes = res * res;
  const int kind = raw / nodes;
  const int k = raw % nodes;
  const int i = k / res, j = k % res;
  const double h = grid_->spacing();
  double x = i * h, y = j * h;
  if (kind == 1) {
    const double v0 = grid_->at(i, j), v1 = grid_->at(i + 1, j);
    x += h * v0 / (v0 - v1);
  } else if (kind == 2) {
    const double v0 = grid_->at(i, j), v1 = grid_->at(i, j + 1);
    y += h * v0 / (v0 - v1);
  }
  if (grid_->periodic()) {
    x -= std::floor(x);
    y -= std::floor(y);
  }
  return {x, y};
}

void NodalTopology::process_cell(int i, int j, const CellResolution* resolution,
                                 UnionFind& domains) {
  const GridField& g = *grid_;
  const int res = g.resolution;
  const std::array<std::array<int, 2>, 4> corner{{{g.wrap(i), g.wrap(j)},
                                                  {g.wrap(i + 1), g.wrap(j)},
                                                  {g.wrap(i + 1), g.wrap(j + 1)},
                                                  {g.wrap(i), g.wrap(j + 1)}}};
  std::array<int, 4> s{};
  std::array<std::size_t, 4> node{};
  for (int k = 0; k < 4; ++k) {
    s[k] = g.sign_at(corner[k][0], corner[k][1]);
    node[k] = static_cast<std::size_t>(corner[k][0]) * res + corner[k][1];
  }

  // Domain adjacency: along edges, and along a diagonal the resolver connected.
  for (int k = 0; k < 4; ++k) {
    const int l = (k + 1) % 4;
    if (s[k] != 0 && s[k] == s[l]) domains.unite(node[k], node[l]);
  }
  if (resolution) {
    const auto& c = resolution->corner_class;
    if (c[0] >= 0 && c[0] == c[2]) domains.unite(node[0], node[2]);
    if (c[1] >= 0 && c[1] == c[3]) domains.unite(node[1], node[3]);
  }

  // Cyclic walk c0 e01 c1 e12 c2 e23 c3 e30, dropping edges without a crossing.
  std::vector<CycleItem> cycle;
  cycle.reserve(8);
  for (int k = 0; k < 4; ++k) {
    CycleItem c;
    c.corner = k;
    if (s[k] == 0) {
      c.nodal = true;
      c.point = point_id(static_cast<int>(node[k]));
    }
    cycle.push_back(c);
    const int l = (k + 1) % 4;
    if (s[k] != 0 && s[l] != 0 && s[k] != s[l]) {
      CycleItem e;
      e.nodal = true;
      e.point = point_id(edge_raw(corner[k][0], corner[k][1], corner[l][0], corner[l][1]));
      cycle.push_back(e);
    }
  }

  const int n = static_cast<int>(cycle.size());
  int start = -1;
  bool any_nodal = false;
  for (int k = 0; k < n; ++k) {
    if (!cycle[k].nodal) continue;
    any_nodal = true;
    if (!cycle[(k + n - 1) % n].nodal) {
      start = k;
      break;
    }
  }
  if (!any_nodal) return;
  if (start < 0) {
    // Every corner is a zero: the whole cell is nodal.
    for (int k = 1; k < n; ++k) links_.emplace_back(cycle[0].point, cycle[k].point);
    return;
  }

  // Alternating runs: group 0, arc 0, group 1, arc 1, ...  Arc p sits between
  // groups p and p+1.
  std::vector<std::vector<int>> groups;
  std::vector<int> arc_label;
  bool in_group = false;
  for (int step = 0; step < n; ++step) {
    const CycleItem& it = cycle[(start + step) % n];
    if (it.nodal) {
      if (!in_group) groups.emplace_back();
      groups.back().push_back(it.point);
      in_group = true;
    } else {
      if (in_group) {
        // Arc corners share a sign; the first corner's class stands for the arc.
        arc_label.push_back(resolution ? resolution->corner_class[it.corner]
                                       : -1 - static_cast<int>(arc_label.size()));
      }
      in_group = false;
    }
  }

  for (const auto& grp : groups)
    for (std::size_t k = 1; k < grp.size(); ++k) links_.emplace_back(grp[0], grp[k]);

  const int m = static_cast<int>(groups.size());
  if (m < 2) return;
  std::vector<std::pair<int, int>> joined_arcs;
  for (int p = 0; p < m; ++p)
    for (int q = p + 1; q < m; ++q)
      if (arc_label[p] >= 0 && arc_label[p] == arc_label[q]) joined_arcs.emplace_back(p, q);

  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      bool separated = false;
      for (const auto& [p, q] : joined_arcs) {
        const bool pin = p >= a && p < b;
        const bool qin = q >= a && q < b;
        if (pin != qin) {
          separated = true;
          break;
        }
      }
      if (!separated) links_.emplace_back(groups[a][0], groups[b][0]);
    }
}

void NodalTopology::walk_boundary_ring(UnionFind& points) {
  (void)points;
  const GridField& g = *grid_;
  const int lo = 1, hi = g.resolution - 2;
  std::vector<std::array<int, 2>> ring;
  for (int i = lo; i < hi; ++i) ring.push_back({i, lo});
  for (int j = lo; j < hi; ++j) ring.push_back({hi, j});
  for (int i = hi; i > lo; --i) ring.push_back({i, hi});
  for (int j = hi; j > lo; --j) ring.push_back({lo, j});

  // Alternate nodes and edges; an edge item is nodal only with a sign change.
  struct Item {
    int sign;   // node sign, or 0 for a nodal edge
    int point;  // -1 for non-nodal items
  };
  std::vector<Item> items;
  const int L = static_cast<int>(ring.size());
  for (int t = 0; t < L; ++t) {
    const auto& a = ring[t];
    const auto& b = ring[(t + 1) % L];
    const int sa = g.sign_at(a[0], a[1]), sb = g.sign_at(b[0], b[1]);
    const int raw_a = a[0] * g.resolution + a[1];
    items.push_back({sa, sa == 0 ? compact_[raw_a] : -1});
    if (sa != 0 && sb != 0 && sa != sb)
      items.push_back({0, compact_[edge_raw(a[0], a[1], b[0], b[1])]});
    else
      items.push_back({sa == 0 ? 0 : sa, -2});  // placeholder, skipped below
  }
  std::vector<Item> seq;
  for (const auto& it : items)
    if (it.point != -2) seq.push_back(it);

  const int n = static_cast<int>(seq.size());
  int first = -1;
  for (int k = 0; k < n; ++k)
    if (seq[k].point < 0 && seq[k].sign != 0) {
      first = k;
      break;
    }
  if (first < 0) return;  // no nonzero node on the ring

  int prev_sign = seq[first].sign;
  std::vector<int> run;
  for (int step = 1; step <= n; ++step) {
    const Item& it = seq[(first + step) % n];
    if (it.point >= 0) {
      run.push_back(it.point);
      continue;
    }
    if (!run.empty() && it.sign != prev_sign) endpoint_points_.push_back(run.front());
    run.clear();
    prev_sign = it.sign;
  }
}

std::vector<int> NodalTopology::raw_candidates(int ci, int cj, int search_cells) const {
  const GridField& g = *grid_;
  const int res = g.resolution;
  const int nodes = res * res;
  std::vector<int> out;
  for (int i = ci - search_cells; i <= ci + search_cells; ++i)
    for (int j = cj - search_cells; j <= cj + search_cells; ++j) {
      int ii = i, jj = j;
      if (g.periodic()) {
        ii = g.wrap(i);
        jj = g.wrap(j);
      } else if (i < 0 || j < 0 || i >= res || j >= res) {
        continue;
      }
      const int k = ii * res + jj;
      for (int kind = 0; kind < 3; ++kind) {
        const int id = compact_[kind * nodes + k];
        if (id >= 0) out.push_back(id);
      }
    }
  return out;
}

std::optional<int> NodalTopology::nearest_point(double x, double y, int search_cells) const {
  return nearest_point_outside(x, y, Disk{x, y, 0.0}, search_cells);
}

std::optional<int> NodalTopology::nearest_point_outside(double x, double y, const Disk& disk,
                                                        int search_cells) const {
  const GridField& g = *grid_;
  const double h = g.spacing();
  const Domain dom = g.periodic() ? Domain::Torus : Domain::Square;
  const int ci = static_cast<int>(std::floor(x / h));
  const int cj = static_cast<int>(std::floor(y / h));
  std::optional<int> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int id : raw_candidates(ci, cj, search_cells)) {
    const auto& p = positions_[id];
    if (disk.radius > 0.0 && domain_distance(dom, p[0], p[1], disk.x, disk.y) < disk.radius)
      continue;
    const double d = domain_distance(dom, p[0], p[1], x, y);
    if (d < best_d) {
      best_d = d;
      best = id;
    }
  }
  return best;
}

std::optional<int> NodalTopology::component_near(double x, double y) const {
  const auto p = nearest_point(x, y);
  if (!p) return std::nullopt;
  return component_[*p];
}

ArcSplit NodalTopology::split_at(const std::vector<Disk>& disks) const {
  const GridField& g = *grid_;
  const Domain dom = g.periodic() ? Domain::Torus : Domain::Square;
  const std::size_t np = positions_.size();
  std::vector<bool> inside(np, false);
  for (std::size_t p = 0; p < np; ++p)
    for (const auto& d : disks)
      if (domain_distance(dom, positions_[p][0], positions_[p][1], d.x, d.y) < d.radius) {
        inside[p] = true;
        break;
      }

  UnionFind arcs(np);
  for (const auto& [a, b] : links_)
    if (!inside[a] && !inside[b]) arcs.unite(a, b);

  ArcSplit out;
  out.arc_of_point.assign(np, -1);
  std::vector<int> label(np, -1);
  for (std::size_t p = 0; p < np; ++p) {
    if (inside[p]) continue;
    const std::size_t r = arcs.find(p);
    if (label[r] < 0) label[r] = out.arc_count++;
    out.arc_of_point[p] = label[r];
  }
  out.contacts.assign(out.arc_count, {});
  out.arc_touches_boundary.assign(out.arc_count, false);
  for (int p : endpoint_points_)
    if (out.arc_of_point[p] >= 0) out.arc_touches_boundary[out.arc_of_point[p]] = true;

  const double h = g.spacing();
  out.crossing_arcs.assign(disks.size(), {});
  for (std::size_t d = 0; d < disks.size(); ++d) {
    const Disk& disk = disks[d];
    // Probe just outside the circle so the nearest nodal point is off the disk.
    const double probe = disk.radius + 0.5 * h;
    const auto angles = circle_sign_changes(g.source, disk.x, disk.y, probe, 1024);
    for (double a : angles) {
      double x = disk.x + probe * std::cos(a), y = disk.y + probe * std::sin(a);
      if (g.periodic()) {
        x -= std::floor(x);
        y -= std::floor(y);
      }
      const auto p = nearest_point_outside(x, y, disk, 3);
      const int arc = p ? out.arc_of_point[*p] : -1;
      out.crossing_arcs[d].push_back(arc);
      if (arc >= 0) out.contacts[arc].push_back(static_cast<int>(d));
    }
  }
  return out;
}

}  // namespace nodal_atlas::nodal
