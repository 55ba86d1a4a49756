#include "perfhom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <unordered_map>

#include "perfhom/errors.hpp"

namespace perfhom {
namespace {

// Grid vertices closer than this fraction of h to a hole boundary are snapped onto it.
constexpr double kSnapFraction = 0.25;

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double signed_area(Point a, Point b, Point c) { return 0.5 * cross(b - a, c - a); }

int sign_of(double s) { return s < 0.0 ? -1 : (s > 0.0 ? 1 : 0); }

/// Union-jack split of square (i, j): the diagonal alternates with the parity
/// of i + j so the grid is invariant under the reflections of the square.
std::array<Triangle, 2> split_square(int v00, int v10, int v01, int v11, bool even) {
  if (even) return {Triangle{v00, v10, v11}, Triangle{v00, v11, v01}};
  return {Triangle{v00, v10, v01}, Triangle{v10, v11, v01}};
}

struct Builder {
  const CellGeometry& cell;
  int n;
  double h;
  std::vector<Point> pts;
  std::vector<double> level;
  std::vector<std::array<int, 2>> lattice;
  std::unordered_map<std::uint64_t, int> cuts;
  std::vector<Triangle> tris;
  std::vector<int> region;

  int add_vertex(Point p, double s, std::array<int, 2> lat) {
    pts.push_back(p);
    level.push_back(s);
    lattice.push_back(lat);
    return static_cast<int>(pts.size()) - 1;
  }

  int cut_vertex(int a, int b) {
    const auto key = edge_key(a, b);
    if (auto it = cuts.find(key); it != cuts.end()) return it->second;
    // Bisection in a canonical orientation so both neighbours see the same point.
    int lo = a, hi = b;
    if (level[lo] > 0.0) std::swap(lo, hi);
    Point pin = pts[lo], pout = pts[hi];
    for (int it = 0; it < 200; ++it) {
      const Point mid = 0.5 * (pin + pout);
      if (mid == pin || mid == pout) break;
      if (cell.signed_distance(mid) < 0.0)
        pin = mid;
      else
        pout = mid;
    }
    Point p = 0.5 * (pin + pout);
    p = cell.holes[cell.nearest_hole(p)].project(p);
    const int id = add_vertex(p, 0.0, {-1, -1});
    cuts.emplace(key, id);
    return id;
  }

  void emit(const std::vector<int>& poly, int reg) {
    if (poly.size() == 3) {
      push(Triangle{poly[0], poly[1], poly[2]}, reg);
    } else if (poly.size() == 4) {
      const double d02 = norm(pts[poly[0]] - pts[poly[2]]);
      const double d13 = norm(pts[poly[1]] - pts[poly[3]]);
      if (d02 <= d13) {
        push(Triangle{poly[0], poly[1], poly[2]}, reg);
        push(Triangle{poly[0], poly[2], poly[3]}, reg);
      } else {
        push(Triangle{poly[0], poly[1], poly[3]}, reg);
        push(Triangle{poly[1], poly[2], poly[3]}, reg);
      }
    } else if (poly.size() > 4) {
      throw Error(ErrorKind::MeshGenerationFailure, "unexpected cut polygon");
    }
  }

  void push(Triangle t, int reg) {
    tris.push_back(t);
    region.push_back(reg);
  }

  int inside_region(Point c) const { return cell.nearest_hole(c) + 1; }

  void classify(Triangle t) {
    std::array<int, 3> sg{};
    for (int k = 0; k < 3; ++k) sg[k] = sign_of(level[t[k]]);
    const bool any_neg = std::ranges::any_of(sg, [](int s) { return s < 0; });
    const bool any_pos = std::ranges::any_of(sg, [](int s) { return s > 0; });
    const Point c = (1.0 / 3.0) * (pts[t[0]] + pts[t[1]] + pts[t[2]]);
    if (!any_neg && !any_pos) {
      push(t, cell.signed_distance(c) < 0.0 ? inside_region(c) : 0);
      return;
    }
    if (!any_neg) {
      push(t, 0);
      return;
    }
    if (!any_pos) {
      push(t, inside_region(c));
      return;
    }
    // Walk the triangle boundary, inserting cut points on sign-changing edges.
    std::vector<int> cycle;
    std::vector<int> side;
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      cycle.push_back(a);
      side.push_back(sg[k]);
      if (sg[k] * sg[(k + 1) % 3] == -1) {
        cycle.push_back(cut_vertex(a, b));
        side.push_back(0);
      }
    }
    std::vector<int> outside, inside;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      if (side[k] >= 0) outside.push_back(cycle[k]);
      if (side[k] <= 0) inside.push_back(cycle[k]);
    }
    emit(outside, 0);
    Point ci{};
    for (int v : inside) ci = ci + pts[v];
    emit(inside, inside_region((1.0 / static_cast<double>(inside.size())) * ci));
  }
};

BoundaryTag face_tag(Point a, Point b) {
  if (a.x == -0.5 && b.x == -0.5) return BoundaryTag::PeriodicLeft;
  if (a.x == 0.5 && b.x == 0.5) return BoundaryTag::PeriodicRight;
  if (a.y == -0.5 && b.y == -0.5) return BoundaryTag::PeriodicBottom;
  if (a.y == 0.5 && b.y == 0.5) return BoundaryTag::PeriodicTop;
  return BoundaryTag::HoleBoundary;
}

/// Edges used by exactly one triangle, in first-seen order.
std::vector<std::pair<int, int>> boundary_of(const std::vector<Triangle>& tris) {
  std::unordered_map<std::uint64_t, int> count;
  count.reserve(tris.size() * 2);
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) ++count[edge_key(t[k], t[(k + 1) % 3])];
  std::vector<std::pair<int, int>> out;
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      if (count[edge_key(a, b)] == 1) out.emplace_back(a, b);
    }
  return out;
}

void attach_periodic_pairs(Mesh& m, const std::vector<int>& grid_to_vertex) {
  const int n = m.n;
  auto id = [&](int i, int j) { return grid_to_vertex[static_cast<std::size_t>(i + (n + 1) * j)]; };
  for (int j = 0; j <= n; ++j) m.periodic_x.emplace_back(id(0, j), id(n, j));
  for (int i = 0; i <= n; ++i) m.periodic_y.emplace_back(id(i, 0), id(i, n));
}

}  // namespace

double Mesh::area(std::size_t t) const {
  const auto& tri = triangles[t];
  return signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

double Mesh::total_area() const {
  double s = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) s += area(t);
  return s;
}

Point Mesh::centroid(std::size_t t) const {
  const auto& tri = triangles[t];
  return (1.0 / 3.0) * (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]);
}

std::vector<int> Mesh::tagged_vertices(BoundaryTag tag) const {
  std::vector<char> mark(vertices.size(), 0);
  for (const auto& e : boundary_edges)
    if (e.tag == tag) mark[e.a] = mark[e.b] = 1;
  std::vector<int> out;
  for (std::size_t v = 0; v < mark.size(); ++v)
    if (mark[v]) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<int> Mesh::outer_vertices() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < on_outer.size(); ++v)
    if (on_outer[v]) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<int> Mesh::hole_vertices() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < on_hole.size(); ++v)
    if (on_hole[v]) out.push_back(static_cast<int>(v));
  return out;
}

CellMeshPair triangulate_cell_pair(const CellGeometry& cell, int n) {
  PERFHOM_THROW_IF(n < 2 || n % 2 != 0, ErrorKind::InvalidArgument, "cell resolution n must be even and >= 2");
  Builder b{cell, n, 1.0 / n, {}, {}, {}, {}, {}, {}};
  const bool has_holes = !cell.holes.empty();

  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // (i - n/2) / n keeps the grid exactly symmetric about the cell centre.
      Point p{static_cast<double>(2 * i - n) / (2.0 * n), static_cast<double>(2 * j - n) / (2.0 * n)};
      double s = has_holes ? cell.signed_distance(p) : std::numeric_limits<double>::infinity();
      std::array<int, 2> lat{i, j};
      if (has_holes && std::abs(s) < kSnapFraction * b.h) {
        PERFHOM_THROW_IF(i == 0 || j == 0 || i == n || j == n, ErrorKind::MeshGenerationFailure,
                         "hole boundary too close to dY for this resolution");
        p = cell.holes[cell.nearest_hole(p)].project(p);
        s = 0.0;
        lat = {-1, -1};
      }
      b.add_vertex(p, s, lat);
    }
  }
  auto grid = [n](int i, int j) { return i + (n + 1) * j; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      for (const auto& t : split_square(grid(i, j), grid(i + 1, j), grid(i, j + 1), grid(i + 1, j + 1), (i + j) % 2 == 0))
        b.classify(t);
    }
  }

  CellMeshPair out;
  Mesh& full = out.full;
  full.kind = MeshKind::FullCell;
  full.n = n;
  full.h = b.h;
  full.vertices = b.pts;
  full.triangles = b.tris;
  full.region = b.region;
  full.lattice = b.lattice;
  full.on_hole.resize(b.pts.size());
  for (std::size_t v = 0; v < b.pts.size(); ++v) full.on_hole[v] = (b.level[v] == 0.0);
  full.on_outer.assign(b.pts.size(), 0);
  for (const auto& [a, c] : boundary_of(full.triangles))
    full.boundary_edges.push_back({a, c, face_tag(full.vertices[a], full.vertices[c])});
  std::vector<int> identity(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (std::size_t k = 0; k < identity.size(); ++k) identity[k] = static_cast<int>(k);
  attach_periodic_pairs(full, identity);

  // Punctured cell: keep region-0 triangles and the vertices they use.
  std::vector<int> full_to_perf(full.vertices.size(), -1);
  Mesh& perf = out.perforated;
  perf.kind = MeshKind::Cell;
  perf.n = n;
  perf.h = b.h;
  for (std::size_t t = 0; t < full.triangles.size(); ++t) {
    if (full.region[t] != 0) continue;
    Triangle tri{};
    for (int k = 0; k < 3; ++k) {
      const int v = full.triangles[t][k];
      if (full_to_perf[v] < 0) {
        full_to_perf[v] = static_cast<int>(perf.vertices.size());
        perf.vertices.push_back(full.vertices[v]);
        perf.lattice.push_back(full.lattice[v]);
        perf.on_hole.push_back(full.on_hole[v]);
        out.perforated_to_full.push_back(v);
      }
      tri[k] = full_to_perf[v];
    }
    perf.triangles.push_back(tri);
    perf.region.push_back(0);
  }
  perf.on_outer.assign(perf.vertices.size(), 0);
  for (const auto& [a, c] : boundary_of(perf.triangles)) {
    const BoundaryTag tag = face_tag(perf.vertices[a], perf.vertices[c]);
    perf.boundary_edges.push_back({a, c, tag});
    if (tag == BoundaryTag::HoleBoundary) {
      PERFHOM_THROW_IF(!perf.on_hole[a] || !perf.on_hole[c], ErrorKind::MeshGenerationFailure,
                       "boundary edge off the hole boundary");
    }
  }
  std::vector<int> grid_to_perf(identity.size());
  for (std::size_t k = 0; k < identity.size(); ++k) grid_to_perf[k] = full_to_perf[k];
  attach_periodic_pairs(perf, grid_to_perf);

  validate_mesh(full);
  validate_mesh(perf);
  return out;
}

Mesh triangulate_cell(const CellGeometry& cell, int n) { return triangulate_cell_pair(cell, n).perforated; }

Mesh tile_domain_mesh(const Mesh& cell_mesh, const PerforatedDomainSpec& spec) {
  PERFHOM_THROW_IF(cell_mesh.kind != MeshKind::Cell, ErrorKind::TilingMismatch, "tiling needs a punctured-cell mesh");
  const int n = cell_mesh.n;
  for (const auto& [l, r] : cell_mesh.periodic_x) {
    PERFHOM_THROW_IF(l < 0 || r < 0 || cell_mesh.vertices[l].y != cell_mesh.vertices[r].y ||
                         cell_mesh.lattice[l][1] != cell_mesh.lattice[r][1],
                     ErrorKind::TilingMismatch, "left/right traces differ");
  }
  for (const auto& [bo, to] : cell_mesh.periodic_y) {
    PERFHOM_THROW_IF(bo < 0 || to < 0 || cell_mesh.vertices[bo].x != cell_mesh.vertices[to].x ||
                         cell_mesh.lattice[bo][0] != cell_mesh.lattice[to][0],
                     ErrorKind::TilingMismatch, "bottom/top traces differ");
  }

  const int cx = spec.cells_x(), cy = spec.cells_y();
  const int gx = cx * n, gy = cy * n;
  const double eps = spec.epsilon();
  const double hd = 1.0 / (static_cast<double>(spec.N) * n);

  Mesh m;
  m.kind = MeshKind::Domain;
  m.n = n * spec.N;
  m.h = hd;
  std::vector<int> lattice_id(static_cast<std::size_t>(gx + 1) * static_cast<std::size_t>(gy + 1), -1);
  std::vector<int> local(cell_mesh.vertices.size());
  const std::size_t nv_cell = cell_mesh.vertices.size();
  m.vertices.reserve(nv_cell * static_cast<std::size_t>(cx * cy));

  for (int b = 0; b < cy; ++b) {
    for (int a = 0; a < cx; ++a) {
      for (std::size_t v = 0; v < nv_cell; ++v) {
        const auto lat = cell_mesh.lattice[v];
        if (lat[0] >= 0) {
          const int I = a * n + lat[0], J = b * n + lat[1];
          int& slot = lattice_id[static_cast<std::size_t>(I) + static_cast<std::size_t>(gx + 1) * J];
          if (slot < 0) {
            slot = static_cast<int>(m.vertices.size());
            m.vertices.push_back({I * hd, J * hd});
            m.lattice.push_back({I, J});
            m.on_hole.push_back(cell_mesh.on_hole[v]);
            m.on_outer.push_back(I == 0 || J == 0 || I == gx || J == gy);
            m.lineage.push_back({static_cast<int>(v), a, b});
          }
          local[v] = slot;
        } else {
          const Point y = cell_mesh.vertices[v];
          local[v] = static_cast<int>(m.vertices.size());
          m.vertices.push_back({eps * (a + 0.5 + y.x), eps * (b + 0.5 + y.y)});
          m.lattice.push_back({-1, -1});
          m.on_hole.push_back(cell_mesh.on_hole[v]);
          m.on_outer.push_back(0);
          m.lineage.push_back({static_cast<int>(v), a, b});
        }
      }
      for (const auto& t : cell_mesh.triangles) {
        m.triangles.push_back({local[t[0]], local[t[1]], local[t[2]]});
        m.region.push_back(0);
      }
      for (const auto& e : cell_mesh.boundary_edges) {
        const bool outer = (e.tag == BoundaryTag::PeriodicLeft && a == 0) ||
                           (e.tag == BoundaryTag::PeriodicRight && a == cx - 1) ||
                           (e.tag == BoundaryTag::PeriodicBottom && b == 0) ||
                           (e.tag == BoundaryTag::PeriodicTop && b == cy - 1);
        if (e.tag == BoundaryTag::HoleBoundary)
          m.boundary_edges.push_back({local[e.a], local[e.b], BoundaryTag::HoleBoundary});
        else if (outer)
          m.boundary_edges.push_back({local[e.a], local[e.b], BoundaryTag::OuterDirichlet});
      }
    }
  }
  return m;
}

Mesh triangulate_solid(double width, double height, int n_total) {
  PERFHOM_THROW_IF(n_total < 1, ErrorKind::InvalidArgument, "n_total must be >= 1");
  const int nx = static_cast<int>(std::lround(width * n_total));
  const int ny = static_cast<int>(std::lround(height * n_total));
  PERFHOM_THROW_IF(nx < 1 || ny < 1 || std::abs(nx - width * n_total) > 1e-9 || std::abs(ny - height * n_total) > 1e-9,
                   ErrorKind::InvalidArgument, "rectangle sides must be multiples of 1/n_total");
  Mesh m;
  m.kind = MeshKind::Solid;
  m.n = n_total;
  m.h = 1.0 / n_total;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      m.vertices.push_back({static_cast<double>(i) / n_total, static_cast<double>(j) / n_total});
      m.lattice.push_back({i, j});
      m.on_hole.push_back(0);
      m.on_outer.push_back(i == 0 || j == 0 || i == nx || j == ny);
    }
  }
  auto id = [nx](int i, int j) { return i + (nx + 1) * j; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (const auto& t : split_square(id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1), (i + j) % 2 == 0)) {
        m.triangles.push_back(t);
        m.region.push_back(0);
      }
  for (const auto& [a, c] : boundary_of(m.triangles)) m.boundary_edges.push_back({a, c, BoundaryTag::OuterDirichlet});
  return m;
}

void validate_mesh(const Mesh& mesh) {
  const double min_area = 1e-12 * mesh.h * mesh.h;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    PERFHOM_THROW_IF(!(mesh.area(t) > min_area), ErrorKind::MeshGenerationFailure,
                     "triangle " + std::to_string(t) + " has non-positive area");
  }
  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) ++count[edge_key(t[k], t[(k + 1) % 3])];
  for (const auto& [key, c] : count)
    PERFHOM_THROW_IF(c > 2, ErrorKind::MeshGenerationFailure, "non-conforming edge shared by more than two triangles");
  for (const auto& [l, r] : mesh.periodic_x) {
    if (l < 0 && r < 0) continue;
    PERFHOM_THROW_IF(l < 0 || r < 0 || mesh.vertices[l].y != mesh.vertices[r].y, ErrorKind::MeshGenerationFailure,
                     "non-matching left/right periodic traces");
  }
  for (const auto& [b, t] : mesh.periodic_y) {
    if (b < 0 && t < 0) continue;
    PERFHOM_THROW_IF(b < 0 || t < 0 || mesh.vertices[b].x != mesh.vertices[t].x, ErrorKind::MeshGenerationFailure,
                     "non-matching bottom/top periodic traces");
  }
}

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
  Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point hi{-lo.x, -lo.y};
  for (const auto& p : mesh.vertices) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  lo_ = lo;
  cell_size_ = mesh.h > 0.0 ? mesh.h : 1.0;
  nx_ = std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) / cell_size_)));
  ny_ = std::max(1, static_cast<int>(std::ceil((hi.y - lo.y) / cell_size_)));
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    for (int v : mesh.triangles[t]) {
      x0 = std::min(x0, mesh.vertices[v].x);
      x1 = std::max(x1, mesh.vertices[v].x);
      y0 = std::min(y0, mesh.vertices[v].y);
      y1 = std::max(y1, mesh.vertices[v].y);
    }
    const int i0 = std::clamp(static_cast<int>(std::floor((x0 - lo_.x) / cell_size_)), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>(std::floor((x1 - lo_.x) / cell_size_)), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>(std::floor((y0 - lo_.y) / cell_size_)), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>(std::floor((y1 - lo_.y) / cell_size_)), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(i + nx_ * j)].push_back(static_cast<int>(t));
  }
}

std::optional<PointLocator::Hit> PointLocator::locate(Point p) const {
  const int i = static_cast<int>(std::floor((p.x - lo_.x) / cell_size_));
  const int j = static_cast<int>(std::floor((p.y - lo_.y) / cell_size_));
  constexpr double kTolerance = 1e-10;
  std::optional<Hit> best;
  double best_min = -kTolerance;
  auto scan = [&](int ii, int jj) {
    if (ii < 0 || jj < 0 || ii >= nx_ || jj >= ny_) return;
    for (int t : buckets_[static_cast<std::size_t>(ii + nx_ * jj)]) {
      const auto& tri = mesh_->triangles[t];
      const Point a = mesh_->vertices[tri[0]], b = mesh_->vertices[tri[1]], c = mesh_->vertices[tri[2]];
      const double area2 = cross(b - a, c - a);
      const double l1 = cross(c - b, p - b) / area2;
      const double l2 = cross(a - c, p - c) / area2;
      const double l3 = 1.0 - l1 - l2;
      const double mn = std::min({l1, l2, l3});
      if (mn > best_min) {
        best_min = mn;
        best = Hit{t, {l1, l2, l3}};
      }
    }
  };
  scan(std::clamp(i, 0, nx_ - 1), std::clamp(j, 0, ny_ - 1));
  if (best) return best;
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di)
      if (di != 0 || dj != 0) scan(i + di, j + dj);
  return best;
}

double PointLocator::interpolate(const std::vector<double>& field, Point p, double outside) const {
  const auto hit = locate(p);
  if (!hit) return outside;
  const auto& tri = mesh_->triangles[hit->triangle];
  return hit->bary[0] * field[tri[0]] + hit->bary[1] * field[tri[1]] + hit->bary[2] * field[tri[2]];
}

void write_mesh(std::ostream& out, const Mesh& mesh, const std::vector<NamedField>& fields) {
  static constexpr const char* kTagNames[] = {"outer", "hole", "left", "right", "bottom", "top"};
  out << "# perfhom mesh v1\n"
      << "# blocks: 'vertices <count>' (x y), 'triangles <count>' (v0 v1 v2 region),\n"
      << "#         'boundary_edges <count>' (v0 v1 tag), 'field <name> <count>' (value)\n";
  out.precision(17);
  out << "vertices " << mesh.vertices.size() << '\n';
  for (const auto& p : mesh.vertices) out << p.x << ' ' << p.y << '\n';
  out << "triangles " << mesh.triangles.size() << '\n';
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << (mesh.region.empty() ? 0 : mesh.region[t]) << '\n';
  }
  out << "boundary_edges " << mesh.boundary_edges.size() << '\n';
  for (const auto& e : mesh.boundary_edges) out << e.a << ' ' << e.b << ' ' << kTagNames[static_cast<int>(e.tag)] << '\n';
  for (const auto& f : fields) {
    PERFHOM_THROW_IF(f.values->size() != mesh.vertices.size(), ErrorKind::FieldKindMismatch,
                     "field '" + f.name + "' is not nodal on this mesh");
    out << "field " << f.name << ' ' << f.values->size() << '\n';
    for (double v : *f.values) out << v << '\n';
  }
  if (!out) throw Error(ErrorKind::IoFailure, "mesh dump failed");
}

}  // namespace perfhom
