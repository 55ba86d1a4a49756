#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "perfhom/geometry.hpp"

namespace perfhom {

enum class BoundaryTag { OuterDirichlet, HoleBoundary, PeriodicLeft, PeriodicRight, PeriodicBottom, PeriodicTop };

enum class MeshKind { Cell, FullCell, Domain, Solid };

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::OuterDirichlet;
};

/// Where a tiled-domain vertex comes from: vertex of the cell mesh plus the
/// lattice index of the eps-cell.
struct VertexLineage {
  int cell_vertex = -1;
  int cell_a = 0;
  int cell_b = 0;
};

using Triangle = std::array<int, 3>;

/// Conforming P1 triangulation. Triangles are counterclockwise.
struct Mesh {
  MeshKind kind = MeshKind::Cell;
  std::vector<Point> vertices;
  std::vector<Triangle> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  /// Cell meshes: (left, right) and (bottom, top) partners on opposite faces of dY.
  std::vector<std::pair<int, int>> periodic_x;
  std::vector<std::pair<int, int>> periodic_y;
  /// Per vertex: lies on a hole boundary (the weight vanishes there).
  std::vector<char> on_hole;
  /// Per vertex: lies on the outer boundary dOmega.
  std::vector<char> on_outer;
  /// Per vertex: background-grid index, {-1, -1} for vertices created or moved by boundary fitting.
  std::vector<std::array<int, 2>> lattice;
  /// Per triangle: 0 outside the holes, i + 1 inside hole i.
  std::vector<int> region;
  /// Domain meshes only.
  std::vector<VertexLineage> lineage;
  /// Grid subdivisions per unit length (per cell for cell meshes).
  int n = 0;
  double h = 0.0;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  double area(std::size_t t) const;
  double total_area() const;
  Point centroid(std::size_t t) const;
  /// Vertices carrying the given tag on at least one boundary edge.
  std::vector<int> tagged_vertices(BoundaryTag tag) const;
  std::vector<int> outer_vertices() const;
  std::vector<int> hole_vertices() const;
};

/// Cell triangulation with the holes meshed as well. `perforated_to_full`
/// maps each vertex of `perforated` onto its copy in `full`.
struct CellMeshPair {
  Mesh full;
  Mesh perforated;
  std::vector<int> perforated_to_full;
};

/// Punctured cell Y_* on an n x n union-jack grid with boundary-fitted holes. n must be even.
Mesh triangulate_cell(const CellGeometry& cell, int n);
CellMeshPair triangulate_cell_pair(const CellGeometry& cell, int n);

/// Omega_eps by periodic tiling of a punctured-cell mesh.
Mesh tile_domain_mesh(const Mesh& cell_mesh, const PerforatedDomainSpec& spec);

/// Solid rectangle (0, width) x (0, height), n_total subdivisions per unit length.
Mesh triangulate_solid(double width, double height, int n_total);

/// Check positivity of areas, conformity and (cell meshes) periodic traces.
void validate_mesh(const Mesh& mesh);

/// Locates points in a mesh through a uniform bucket grid.
class PointLocator {
 public:
  struct Hit {
    int triangle = -1;
    std::array<double, 3> bary{};
  };

  explicit PointLocator(const Mesh& mesh);
  std::optional<Hit> locate(Point p) const;
  /// Linear interpolation of a nodal field; `outside` when no triangle contains p.
  double interpolate(const std::vector<double>& field, Point p, double outside = 0.0) const;

 private:
  const Mesh* mesh_;
  Point lo_;
  double cell_size_;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::vector<int>> buckets_;
};

struct NamedField {
  std::string name;
  const std::vector<double>* values;
};

/// Plain-text dump: header comments, then `vertices`, `triangles` and
/// `boundary_edges` blocks, then one `field <name>` block per nodal field.
void write_mesh(std::ostream& out, const Mesh& mesh, const std::vector<NamedField>& fields = {});

}  // namespace perfhom
