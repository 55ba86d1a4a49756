#include "perfhom/fem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perfhom/errors.hpp"

namespace perfhom {

double Mat2::min_eigenvalue() const {
  const double mean = 0.5 * (a11 + a22);
  const double dev = std::hypot(0.5 * (a11 - a22), a12);
  return mean - dev;
}

CoefficientField CoefficientField::constant(Mat2 a) {
  CoefficientField c;
  c.constant_ = a;
  c.mu_ = a.min_eigenvalue();
  PERFHOM_THROW_IF(!(c.mu_ > 0.0), ErrorKind::InvalidArgument, "coefficient matrix is not positive definite");
  return c;
}

CoefficientField CoefficientField::periodic(MatrixFunction fn) {
  CoefficientField c;
  c.fn_ = std::move(fn);
  double mu = std::numeric_limits<double>::infinity();
  constexpr int kSamples = 64;
  for (int j = 0; j < kSamples; ++j)
    for (int i = 0; i < kSamples; ++i)
      mu = std::min(mu, c.fn_({(i + 0.5) / kSamples - 0.5, (j + 0.5) / kSamples - 0.5}).min_eigenvalue());
  c.mu_ = mu;
  PERFHOM_THROW_IF(!(mu > 0.0), ErrorKind::InvalidArgument, "coefficient field is not uniformly elliptic");
  return c;
}

CoefficientField CoefficientField::at_scale(double eps) const {
  CoefficientField c = *this;
  c.scale_ = eps;
  return c;
}

Mat2 CoefficientField::operator()(Point x) const {
  if (constant_) return *constant_;
  return fn_(scale_ > 0.0 ? cell_coordinate(x, scale_) : x);
}

std::array<Point, 3> edge_midpoints(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  const auto& v = mesh.vertices;
  return {0.5 * (v[tri[0]] + v[tri[1]]), 0.5 * (v[tri[1]] + v[tri[2]]), 0.5 * (v[tri[2]] + v[tri[0]])};
}

std::array<Point, 3> shape_gradients(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  const Point p0 = mesh.vertices[tri[0]], p1 = mesh.vertices[tri[1]], p2 = mesh.vertices[tri[2]];
  const double twice = cross(p1 - p0, p2 - p0);
  const double inv = 1.0 / twice;
  return {Point{(p1.y - p2.y) * inv, (p2.x - p1.x) * inv}, Point{(p2.y - p0.y) * inv, (p0.x - p2.x) * inv},
          Point{(p0.y - p1.y) * inv, (p1.x - p0.x) * inv}};
}

Point element_gradient(const Mesh& mesh, std::size_t t, std::span<const double> field) {
  const auto g = shape_gradients(mesh, t);
  const auto& tri = mesh.triangles[t];
  return field[tri[0]] * g[0] + field[tri[1]] * g[1] + field[tri[2]] * g[2];
}

double Weight::at_midpoint(int a, int b) const {
  if (values.empty() || power == 0) return 1.0;
  const double w = std::max(0.5 * (values[a] + values[b]), floor);
  return std::pow(w, power);
}

namespace {

// Edge k of the midpoint rule joins local vertices k and k+1.
constexpr int kEdgeStart[3] = {0, 1, 2};
constexpr int kEdgeEnd[3] = {1, 2, 0};

template <class ElementKernel>
CsrMatrix assemble(const Mesh& mesh, const DofMap* dofs, ElementKernel&& kernel) {
  const DofMap identity = dofs ? DofMap{} : DofMap::identity(mesh.vertices.size());
  const DofMap& map = dofs ? *dofs : identity;
  CsrMatrix m = pattern_from_triangles(mesh.triangles, map);
  double ke[3][3];
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    kernel(t, ke);
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      const int r = map.vertex_to_dof[tri[i]];
      if (r < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int c = map.vertex_to_dof[tri[j]];
        if (c < 0) continue;
        m.values[m.find(r, c)] += ke[i][j];
      }
    }
  }
  return m;
}

}  // namespace

CsrMatrix assemble_weighted_stiffness(const Mesh& mesh, const CoefficientField& a, Weight w, const DofMap* dofs) {
  return assemble(mesh, dofs, [&](std::size_t t, double (&ke)[3][3]) {
    const auto& tri = mesh.triangles[t];
    const auto grads = shape_gradients(mesh, t);
    const auto mids = edge_midpoints(mesh, t);
    const double qw = mesh.area(t) / 3.0;
    // Quadrature-averaged (w^power A), then one symmetric element matrix.
    Mat2 acc{0.0, 0.0, 0.0};
    for (int q = 0; q < 3; ++q) {
      const double wq = w.at_midpoint(tri[kEdgeStart[q]], tri[kEdgeEnd[q]]);
      const Mat2 aq = a(mids[q]);
      acc.a11 += qw * wq * aq.a11;
      acc.a12 += qw * wq * aq.a12;
      acc.a22 += qw * wq * aq.a22;
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        ke[i][j] = ke[j][i] = dot(acc.apply(grads[j]), grads[i]);
      }
    }
  });
}

CsrMatrix assemble_weighted_mass(const Mesh& mesh, Weight w, const DofMap* dofs) {
  return assemble(mesh, dofs, [&](std::size_t t, double (&ke)[3][3]) {
    const auto& tri = mesh.triangles[t];
    const double qw = mesh.area(t) / 3.0;
    // At the midpoint of edge (k, k+1) those two shape functions equal 1/2, the third 0.
    double wq[3];
    for (int q = 0; q < 3; ++q) wq[q] = w.at_midpoint(tri[kEdgeStart[q]], tri[kEdgeEnd[q]]);
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        double s = 0.0;
        for (int q = 0; q < 3; ++q) {
          const double pi = (kEdgeStart[q] == i || kEdgeEnd[q] == i) ? 0.5 : 0.0;
          const double pj = (kEdgeStart[q] == j || kEdgeEnd[q] == j) ? 0.5 : 0.0;
          s += wq[q] * pi * pj;
        }
        ke[i][j] = ke[j][i] = qw * s;
      }
    }
  });
}

std::vector<double> assemble_load(const Mesh& mesh, const SourceTerm& source, std::span<const double> w) {
  const bool weighted = source.form == LoadForm::WeightedSource;
  PERFHOM_THROW_IF(weighted && (!source.f || source.f_vector), ErrorKind::FieldKindMismatch,
                   "WeightedSource takes a scalar f");
  PERFHOM_THROW_IF(!weighted && source.f, ErrorKind::FieldKindMismatch, "DivForm takes a vector f and scalar F");
  PERFHOM_THROW_IF(!w.empty() && w.size() != mesh.vertices.size(), ErrorKind::FieldKindMismatch,
                   "weight is not nodal on this mesh");
  std::vector<double> b(mesh.vertices.size(), 0.0);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto mids = edge_midpoints(mesh, t);
    const double qw = mesh.area(t) / 3.0;
    const auto grads = weighted ? std::array<Point, 3>{} : shape_gradients(mesh, t);
    for (int q = 0; q < 3; ++q) {
      const int a = tri[kEdgeStart[q]], c = tri[kEdgeEnd[q]];
      const double wq = w.empty() ? 1.0 : 0.5 * (w[a] + w[c]);
      if (weighted) {
        const double val = qw * wq * source.f(mids[q]);
        b[a] += 0.5 * val;
        b[c] += 0.5 * val;
        continue;
      }
      if (source.f_vector) {
        const Point fv = source.f_vector(mids[q]);
        for (int i = 0; i < 3; ++i) b[tri[i]] -= qw * wq * dot(fv, grads[i]);
      }
      if (source.F) {
        const double val = qw * source.F(mids[q]);
        b[a] += 0.5 * val;
        b[c] += 0.5 * val;
      }
    }
  }
  return b;
}

std::array<std::vector<double>, 2> recover_gradient(const Mesh& mesh, std::span<const double> field) {
  std::vector<double> gx(mesh.vertices.size(), 0.0), gy(mesh.vertices.size(), 0.0), wsum(mesh.vertices.size(), 0.0);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Point g = element_gradient(mesh, t, field);
    const double a = mesh.area(t);
    for (int v : mesh.triangles[t]) {
      gx[v] += a * g.x;
      gy[v] += a * g.y;
      wsum[v] += a;
    }
  }
  for (std::size_t v = 0; v < wsum.size(); ++v) {
    if (wsum[v] > 0.0) {
      gx[v] /= wsum[v];
      gy[v] /= wsum[v];
    }
  }
  return {std::move(gx), std::move(gy)};
}

double integrate(const Mesh& mesh, std::span<const double> field) {
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    s += mesh.area(t) * (field[tri[0]] + field[tri[1]] + field[tri[2]]) / 3.0;
  }
  return s;
}

}  // namespace perfhom
