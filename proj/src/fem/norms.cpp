#include "perfhom/fem/norms.hpp"

#include <algorithm>
#include <cmath>

namespace perfhom {
namespace {

constexpr int kEdgeStart[3] = {0, 1, 2};
constexpr int kEdgeEnd[3] = {1, 2, 0};

template <class PointValue>
double quadrature_norm(const Mesh& mesh, double p, PointValue&& value) {
  if (std::isinf(p)) {
    double worst = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) worst = std::max(worst, std::abs(value(t, -1)));
    return worst;
  }
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const double qw = mesh.area(t) / 3.0;
    for (int q = 0; q < 3; ++q) s += qw * std::pow(std::abs(value(t, q)), p);
  }
  return std::pow(s, 1.0 / p);
}

}  // namespace

double weighted_norm(const Mesh& mesh, std::span<const double> field, std::span<const double> w, double p,
                     bool gradient) {
  auto wval = [&](std::size_t t, int q) {
    if (w.empty()) return 1.0;
    const auto& tri = mesh.triangles[t];
    if (q < 0) return (w[tri[0]] + w[tri[1]] + w[tri[2]]) / 3.0;
    return 0.5 * (w[tri[kEdgeStart[q]]] + w[tri[kEdgeEnd[q]]]);
  };
  if (gradient) {
    return quadrature_norm(mesh, p, [&](std::size_t t, int q) {
      return wval(t, q) * norm(element_gradient(mesh, t, field));
    });
  }
  return quadrature_norm(mesh, p, [&](std::size_t t, int q) {
    const auto& tri = mesh.triangles[t];
    const double u = q < 0 ? (field[tri[0]] + field[tri[1]] + field[tri[2]]) / 3.0
                           : 0.5 * (field[tri[kEdgeStart[q]]] + field[tri[kEdgeEnd[q]]]);
    return wval(t, q) * u;
  });
}

double function_norm(const Mesh& mesh, const ScalarFunction& f, double p) {
  return quadrature_norm(mesh, p, [&](std::size_t t, int q) {
    return q < 0 ? f(mesh.centroid(t)) : f(edge_midpoints(mesh, t)[q]);
  });
}

double function_norm(const Mesh& mesh, const VectorFunction& f, double p) {
  return quadrature_norm(mesh, p, [&](std::size_t t, int q) {
    return norm(q < 0 ? f(mesh.centroid(t)) : f(edge_midpoints(mesh, t)[q]));
  });
}

}  // namespace perfhom
