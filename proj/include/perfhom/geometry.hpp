#pragma once

#include <array>
#include <cmath>
#include <variant>
#include <vector>

namespace perfhom {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

struct Disk {
  Point center;
  double radius = 0.0;
};

/// Simple polygon; vertices are stored counterclockwise after construction.
struct Polygon {
  std::vector<Point> vertices;
};

/// One hole tau_i of the unit cell Y = (-1/2, 1/2)^2. `offset` inflates the
/// hole by a distance (used for the enlarged holes T').
class HoleSpec {
 public:
  HoleSpec(Disk disk, int label = 0);
  HoleSpec(Polygon polygon, int label = 0);

  const std::variant<Disk, Polygon>& shape() const { return shape_; }
  int label() const { return label_; }
  double offset() const { return offset_; }
  bool is_disk() const { return std::holds_alternative<Disk>(shape_); }

  /// Copy grown outward by `delta`.
  HoleSpec inflated(double delta) const;

  /// Negative inside, zero on the boundary, positive outside.
  double signed_distance(Point p) const;
  /// Closest point on the hole boundary.
  Point project(Point p) const;
  /// Distance from the hole to the boundary of Y (negative if it leaves Y).
  double distance_to_cell_boundary() const;
  double area() const;
  double perimeter() const;

 private:
  std::variant<Disk, Polygon> shape_;
  int label_ = 0;
  double offset_ = 0.0;
};

double hole_distance(const HoleSpec& a, const HoleSpec& b);

/// Unit cell with holes; dimension is fixed to 2.
struct CellGeometry {
  std::vector<HoleSpec> holes;
  double c0 = 0.0;

  /// Signed distance to T (the union of holes); +inf when T is empty.
  double signed_distance(Point y) const;
  /// Index of the hole closest to y, or -1 when there are none.
  int nearest_hole(Point y) const;
  double hole_area() const;
  /// Holes grown by delta (T' for delta = c0/8).
  CellGeometry inflated(double delta) const;
};

CellGeometry build_cell_geometry(std::vector<HoleSpec> holes, double c0);

/// Omega = (0, width) x (0, height) tiled by eps-cells, eps = 1/N. The cell
/// with lattice index (a, b) occupies eps*[a, a+1] x eps*[b, b+1] and maps
/// x -> y = x/eps - (a, b) - (1/2, 1/2).
struct PerforatedDomainSpec {
  int width = 1;
  int height = 1;
  CellGeometry cell;
  int N = 1;

  double epsilon() const { return 1.0 / N; }
  int cells_x() const { return width * N; }
  int cells_y() const { return height * N; }
  int hole_count() const { return cells_x() * cells_y() * static_cast<int>(cell.holes.size()); }
  /// dist(dOmega, dT_eps) for the lattice-aligned rectangle.
  double boundary_hole_distance() const;
};

PerforatedDomainSpec build_perforated_domain(const CellGeometry& cell, std::array<int, 2> omega_cells, int N);

/// Cell coordinate y in Y of a physical point x at scale eps.
Point cell_coordinate(Point x, double eps);

}  // namespace perfhom
