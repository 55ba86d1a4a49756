#include "perfhom/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "perfhom/errors.hpp"

namespace perfhom {
namespace {

double segment_distance(Point p, Point a, Point b, Point* closest = nullptr) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Point q = a + t * ab;
  if (closest) *closest = q;
  return norm(p - q);
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool inside_polygon(const Polygon& poly, Point p) {
  bool inside = false;
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double xc = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

double signed_area(const Polygon& poly) {
  double s = 0.0;
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) s += cross(v[j], v[i]);
  return 0.5 * s;
}

/// Distance between the boundaries of two base shapes (no offsets), 0 if they overlap.
double base_distance(const HoleSpec& a, const HoleSpec& b) {
  if (a.is_disk() && b.is_disk()) {
    const auto& da = std::get<Disk>(a.shape());
    const auto& db = std::get<Disk>(b.shape());
    return std::max(0.0, norm(da.center - db.center) - da.radius - db.radius);
  }
  if (a.is_disk() || b.is_disk()) {
    const auto& d = a.is_disk() ? std::get<Disk>(a.shape()) : std::get<Disk>(b.shape());
    const auto& p = a.is_disk() ? b : a;
    HoleSpec bare(std::get<Polygon>(p.shape()));
    return std::max(0.0, bare.signed_distance(d.center) - d.radius);
  }
  const auto& pa = std::get<Polygon>(a.shape()).vertices;
  const auto& pb = std::get<Polygon>(b.shape()).vertices;
  if (inside_polygon(std::get<Polygon>(a.shape()), pb.front()) ||
      inside_polygon(std::get<Polygon>(b.shape()), pa.front()))
    return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, j = pa.size() - 1; i < pa.size(); j = i++) {
    for (std::size_t k = 0, l = pb.size() - 1; k < pb.size(); l = k++) {
      if (segments_intersect(pa[j], pa[i], pb[l], pb[k])) return 0.0;
      best = std::min({best, segment_distance(pa[j], pb[l], pb[k]), segment_distance(pa[i], pb[l], pb[k]),
                       segment_distance(pb[l], pa[j], pa[i]), segment_distance(pb[k], pa[j], pa[i])});
    }
  }
  return best;
}

}  // namespace

HoleSpec::HoleSpec(Disk disk, int label) : shape_(disk), label_(label) {
  PERFHOM_THROW_IF(!(disk.radius > 0.0), ErrorKind::InvalidArgument, "disk radius must be positive");
}

HoleSpec::HoleSpec(Polygon polygon, int label) : label_(label) {
  PERFHOM_THROW_IF(polygon.vertices.size() < 3, ErrorKind::InvalidArgument, "polygon needs at least 3 vertices");
  if (signed_area(polygon) < 0.0) std::reverse(polygon.vertices.begin(), polygon.vertices.end());
  PERFHOM_THROW_IF(!(signed_area(polygon) > 0.0), ErrorKind::InvalidArgument, "degenerate polygon");
  shape_ = std::move(polygon);
}

HoleSpec HoleSpec::inflated(double delta) const {
  HoleSpec copy = *this;
  copy.offset_ += delta;
  return copy;
}

double HoleSpec::signed_distance(Point p) const {
  if (const auto* d = std::get_if<Disk>(&shape_)) return norm(p - d->center) - d->radius - offset_;
  const auto& poly = std::get<Polygon>(shape_);
  double best = std::numeric_limits<double>::infinity();
  const auto& v = poly.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) best = std::min(best, segment_distance(p, v[j], v[i]));
  return (inside_polygon(poly, p) ? -best : best) - offset_;
}

Point HoleSpec::project(Point p) const {
  if (const auto* d = std::get_if<Disk>(&shape_)) {
    const Point r = p - d->center;
    const double len = norm(r);
    if (len == 0.0) return d->center + Point{d->radius + offset_, 0.0};
    return d->center + ((d->radius + offset_) / len) * r;
  }
  const auto& v = std::get<Polygon>(shape_).vertices;
  double best = std::numeric_limits<double>::infinity();
  Point q;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    Point c;
    const double dist = segment_distance(p, v[j], v[i], &c);
    if (dist < best) {
      best = dist;
      q = c;
    }
  }
  if (offset_ == 0.0 || best == 0.0) return q;
  // Outside points move along the normal of the rounded offset curve; inside
  // points are pushed outward through the nearest base point.
  const double sign = inside_polygon(std::get<Polygon>(shape_), p) ? -1.0 : 1.0;
  return q + (sign * offset_ / best) * (p - q);
}

double HoleSpec::distance_to_cell_boundary() const {
  if (const auto* d = std::get_if<Disk>(&shape_)) {
    return std::min(0.5 - std::abs(d->center.x), 0.5 - std::abs(d->center.y)) - d->radius - offset_;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : std::get<Polygon>(shape_).vertices)
    best = std::min({best, 0.5 - std::abs(v.x), 0.5 - std::abs(v.y)});
  return best - offset_;
}

double HoleSpec::area() const {
  if (const auto* d = std::get_if<Disk>(&shape_)) return std::numbers::pi * std::pow(d->radius + offset_, 2);
  // Steiner formula; exact for convex polygons.
  return signed_area(std::get<Polygon>(shape_)) + perimeter() * offset_ + std::numbers::pi * offset_ * offset_;
}

double HoleSpec::perimeter() const {
  if (const auto* d = std::get_if<Disk>(&shape_)) return 2.0 * std::numbers::pi * (d->radius + offset_);
  const auto& v = std::get<Polygon>(shape_).vertices;
  double s = 0.0;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) s += norm(v[i] - v[j]);
  return s;
}

double hole_distance(const HoleSpec& a, const HoleSpec& b) {
  return base_distance(a, b) - a.offset() - b.offset();
}

double CellGeometry::signed_distance(Point y) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : holes) best = std::min(best, h.signed_distance(y));
  return best;
}

int CellGeometry::nearest_hole(Point y) const {
  int idx = -1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const double d = holes[i].signed_distance(y);
    if (d < best) {
      best = d;
      idx = static_cast<int>(i);
    }
  }
  return idx;
}

double CellGeometry::hole_area() const {
  double s = 0.0;
  for (const auto& h : holes) s += h.area();
  return s;
}

CellGeometry CellGeometry::inflated(double delta) const {
  CellGeometry out{{}, c0};
  for (const auto& h : holes) out.holes.push_back(h.inflated(delta));
  return out;
}

CellGeometry build_cell_geometry(std::vector<HoleSpec> holes, double c0) {
  PERFHOM_THROW_IF(!(c0 > 0.0), ErrorKind::InvalidArgument, "c0 must be positive");
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const double dy = holes[i].distance_to_cell_boundary();
    PERFHOM_THROW_IF(dy <= 0.0, ErrorKind::HoleOutsideCell,
                     "hole " + std::to_string(i) + " is not strictly inside Y");
    PERFHOM_THROW_IF(dy < c0, ErrorKind::SeparationViolation,
                     "hole " + std::to_string(i) + " is " + std::to_string(dy) + " from dY, below c0");
    for (std::size_t j = 0; j < i; ++j) {
      const double dh = hole_distance(holes[i], holes[j]);
      PERFHOM_THROW_IF(dh < c0, ErrorKind::SeparationViolation,
                       "holes " + std::to_string(j) + " and " + std::to_string(i) + " are closer than c0");
    }
  }
  return CellGeometry{std::move(holes), c0};
}

double PerforatedDomainSpec::boundary_hole_distance() const {
  if (cell.holes.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : cell.holes) best = std::min(best, h.distance_to_cell_boundary());
  return epsilon() * best;
}

PerforatedDomainSpec build_perforated_domain(const CellGeometry& cell, std::array<int, 2> omega_cells, int N) {
  PERFHOM_THROW_IF(N < 1, ErrorKind::InvalidArgument, "N must be >= 1");
  PERFHOM_THROW_IF(omega_cells[0] < 1 || omega_cells[1] < 1, ErrorKind::InvalidArgument,
                   "omega side lengths must be >= 1");
  PerforatedDomainSpec spec{omega_cells[0], omega_cells[1], cell, N};
  // Scaled reading of (H); holds by construction on the lattice.
  const double dist = spec.boundary_hole_distance();
  PERFHOM_THROW_IF(dist < cell.c0 * spec.epsilon() * (1.0 - 1e-12), ErrorKind::GeometryViolation,
                   "dist(dOmega, dT_eps) below c0*eps");
  for (const auto& h : cell.inflated(cell.c0 / 8.0).holes) {
    PERFHOM_THROW_IF(h.distance_to_cell_boundary() <= 0.0, ErrorKind::GeometryViolation,
                     "enlarged hole T' meets the cell boundary");
  }
  return spec;
}

Point cell_coordinate(Point x, double eps) {
  const double sx = x.x / eps;
  const double sy = x.y / eps;
  return {sx - std::floor(sx) - 0.5, sy - std::floor(sy) - 0.5};
}

}  // namespace perfhom
