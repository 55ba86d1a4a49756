#pragma once

#include <limits>
#include <span>

#include "perfhom/fem/assembly.hpp"
#include "perfhom/mesh.hpp"

namespace perfhom {

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// ||w g||_{L^p}: g is the nodal field or (gradient = true) the magnitude of its
/// element gradient. Finite p uses the edge-midpoint rule; p = infinity takes
/// the maximum over element centroids. An empty w means w = 1.
double weighted_norm(const Mesh& mesh, std::span<const double> field, std::span<const double> w, double p,
                     bool gradient);

/// ||f||_{L^p} of a scalar or vector function on the mesh, same quadrature.
double function_norm(const Mesh& mesh, const ScalarFunction& f, double p);
double function_norm(const Mesh& mesh, const VectorFunction& f, double p);

}  // namespace perfhom
