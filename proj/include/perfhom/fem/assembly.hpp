#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "perfhom/fem/sparse.hpp"
#include "perfhom/mesh.hpp"

namespace perfhom {

/// Symmetric 2x2 matrix.
struct Mat2 {
  double a11 = 1.0;
  double a12 = 0.0;
  double a22 = 1.0;

  Point apply(Point v) const { return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y}; }
  double min_eigenvalue() const;
  static Mat2 identity() { return {}; }
  friend Mat2 operator*(double s, Mat2 m) { return {s * m.a11, s * m.a12, s * m.a22}; }
};

using ScalarFunction = std::function<double(Point)>;
using VectorFunction = std::function<Point(Point)>;
using MatrixFunction = std::function<Mat2(Point)>;

/// Y-periodic coefficient A(y). On a domain mesh (`scale` = eps > 0) the
/// physical point is first mapped into the unit cell.
class CoefficientField {
 public:
  static CoefficientField constant(Mat2 a);
  /// Periodic callable in cell coordinates; ellipticity is checked on a sample grid.
  static CoefficientField periodic(MatrixFunction fn);

  /// Same field read at scale eps: A_eps(x) = A(x / eps).
  CoefficientField at_scale(double eps) const;

  Mat2 operator()(Point x) const;
  bool is_constant() const { return constant_.has_value(); }
  double ellipticity() const { return mu_; }

 private:
  std::optional<Mat2> constant_;
  MatrixFunction fn_;
  double mu_ = 1.0;
  double scale_ = 0.0;
};

/// Three-point edge-midpoint rule on triangle t: points and common weight (area / 3).
std::array<Point, 3> edge_midpoints(const Mesh& mesh, std::size_t t);
/// Gradients of the three P1 shape functions on triangle t.
std::array<Point, 3> shape_gradients(const Mesh& mesh, std::size_t t);
/// Gradient of a nodal field on triangle t.
Point element_gradient(const Mesh& mesh, std::size_t t, std::span<const double> field);

/// Nodal weight field with exponent; an empty span means w = 1.
struct Weight {
  std::span<const double> values;
  int power = 0;
  /// Lower bound applied to the interpolated weight at quadrature points.
  double floor = 0.0;

  /// w^power at the midpoint of edge (a, b).
  double at_midpoint(int a, int b) const;
};

/// Entry (i, j) = sum_K int_K w^power (A grad psi_j) . grad psi_i.
CsrMatrix assemble_weighted_stiffness(const Mesh& mesh, const CoefficientField& a, Weight w,
                                      const DofMap* dofs = nullptr);
/// Entry (i, j) = sum_K int_K w^power psi_j psi_i.
CsrMatrix assemble_weighted_mass(const Mesh& mesh, Weight w, const DofMap* dofs = nullptr);

enum class LoadForm { WeightedSource, DivForm };

/// Right-hand side: WeightedSource uses scalar f (L u = w f); DivForm uses
/// vector f and scalar F (L u = div(w f) + F).
struct SourceTerm {
  LoadForm form = LoadForm::WeightedSource;
  ScalarFunction f;
  VectorFunction f_vector;
  ScalarFunction F;
};

/// WeightedSource: b_i = int w f psi_i. DivForm: b_i = -int w f . grad psi_i + int F psi_i.
/// `w` enters linearly.
std::vector<double> assemble_load(const Mesh& mesh, const SourceTerm& source, std::span<const double> w);

/// Area-weighted average of element gradients at the vertices.
std::array<std::vector<double>, 2> recover_gradient(const Mesh& mesh, std::span<const double> field);

/// int over the mesh of a nodal field (exact for P1).
double integrate(const Mesh& mesh, std::span<const double> field);

}  // namespace perfhom
