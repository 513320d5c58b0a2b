// Combinatorial nodal structure of a sampled field.
//
// Nodal points are zero samples and sign-changing grid edges.  Inside each
// cell the nodal points on the cell boundary are linked following the
// marching-squares rule, with ambiguous cells using the same decision that the
// domain labelling uses, so domains and nodal components never disagree about
// a pinch.
#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "nodal_atlas/nodal.hpp"

namespace nodal_atlas::nodal {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

struct Disk {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
};

// Nodal set with small disks around vertices removed.
struct ArcSplit {
  std::vector<int> arc_of_point;           // -1 for points inside a disk
  int arc_count = 0;
  // Per arc, the disks it leaves through, one entry per circle crossing.
  std::vector<std::vector<int>> contacts;
  std::vector<bool> arc_touches_boundary;
  // Per disk, the arc met at each sign change of phi on the disk's circle,
  // counter-clockwise; -1 if no nodal point was found next to the crossing.
  std::vector<std::vector<int>> crossing_arcs;
};

class NodalTopology {
 public:
  explicit NodalTopology(const GridField& grid);

  const GridField& grid() const noexcept { return *grid_; }

  int domain_count() const noexcept { return domain_count_; }
  int component_count() const noexcept { return component_count_; }
  int point_count() const noexcept { return static_cast<int>(positions_.size()); }

  std::array<double, 2> position(int point) const { return positions_.at(point); }
  int component_of(int point) const { return component_.at(point); }
  bool component_touches_boundary(int component) const { return touches_boundary_.at(component); }

  // Square only: transitions of sign along the outermost interior ring, each
  // one the end of a nodal arc on the boundary.
  int boundary_endpoints() const noexcept { return static_cast<int>(endpoint_points_.size()); }
  const std::vector<int>& endpoint_points() const noexcept { return endpoint_points_; }

  const std::vector<std::pair<int, int>>& links() const noexcept { return links_; }

  // Domain label per grid node (-1 for nodal or excluded nodes).
  const std::vector<int>& domain_labels() const noexcept { return domain_label_; }

  std::optional<int> nearest_point(double x, double y, int search_cells = 2) const;
  std::optional<int> component_near(double x, double y) const;
  std::optional<int> nearest_point_outside(double x, double y, const Disk& disk,
                                           int search_cells = 2) const;

  ArcSplit split_at(const std::vector<Disk>& disks) const;

 private:
  int point_id(int raw);
  int edge_raw(int i0, int j0, int i1, int j1) const;
  void process_cell(int i, int j, const CellResolution* resolution, UnionFind& domains);
  void walk_boundary_ring(UnionFind& points);
  std::array<double, 2> raw_position(int raw) const;
  std::vector<int> raw_candidates(int ci, int cj, int search_cells) const;

  const GridField* grid_;
  std::vector<int> compact_;  // raw id -> compact point id
  std::vector<int> raw_;      // compact -> raw
  std::vector<std::array<double, 2>> positions_;
  std::vector<std::pair<int, int>> links_;
  std::vector<int> component_;
  std::vector<bool> touches_boundary_;
  std::vector<int> endpoint_points_;
  std::vector<int> domain_label_;
  int domain_count_ = 0;
  int component_count_ = 0;
};

}  // namespace nodal_atlas::nodal
