#include "perfhom/fem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "perfhom/errors.hpp"

namespace perfhom {

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(rows));
  multiply(x, y);
  return y;
}

int CsrMatrix::find(int i, int j) const {
  const auto first = col_idx.begin() + row_ptr[i];
  const auto last = col_idx.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return -1;
  return static_cast<int>(it - col_idx.begin());
}

double CsrMatrix::at(int i, int j) const {
  const int k = find(i, j);
  return k < 0 ? 0.0 : values[k];
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(rows), 0.0);
  for (int i = 0; i < rows; ++i) d[i] = at(i, i);
  return d;
}

double CsrMatrix::asymmetry() const {
  double worst = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) worst = std::max(worst, std::abs(values[k] - at(col_idx[k], i)));
  return worst;
}

CsrMatrix CsrMatrix::submatrix(std::span<const int> keep) const {
  std::vector<int> remap(static_cast<std::size_t>(cols), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) remap[keep[k]] = static_cast<int>(k);
  CsrMatrix out;
  out.rows = out.cols = static_cast<int>(keep.size());
  out.symmetric = symmetric;
  out.row_ptr.assign(1, 0);
  for (int i : keep) {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const int j = remap[col_idx[k]];
      if (j < 0) continue;
      out.col_idx.push_back(j);
      out.values.push_back(values[k]);
    }
    out.row_ptr.push_back(static_cast<int>(out.col_idx.size()));
  }
  return out;
}

CsrMatrix linear_combination(double alpha, const CsrMatrix& a, double beta, const CsrMatrix& b) {
  PERFHOM_THROW_IF(a.rows != b.rows || a.cols != b.cols, ErrorKind::InvalidArgument, "matrix shapes differ");
  CsrMatrix out;
  out.rows = a.rows;
  out.cols = a.cols;
  out.symmetric = a.symmetric && b.symmetric;
  out.row_ptr.assign(1, 0);
  for (int i = 0; i < a.rows; ++i) {
    int ka = a.row_ptr[i], kb = b.row_ptr[i];
    const int ea = a.row_ptr[i + 1], eb = b.row_ptr[i + 1];
    while (ka < ea || kb < eb) {
      const int ja = ka < ea ? a.col_idx[ka] : a.cols;
      const int jb = kb < eb ? b.col_idx[kb] : b.cols;
      if (ja == jb) {
        out.col_idx.push_back(ja);
        out.values.push_back(alpha * a.values[ka++] + beta * b.values[kb++]);
      } else if (ja < jb) {
        out.col_idx.push_back(ja);
        out.values.push_back(alpha * a.values[ka++]);
      } else {
        out.col_idx.push_back(jb);
        out.values.push_back(beta * b.values[kb++]);
      }
    }
    out.row_ptr.push_back(static_cast<int>(out.col_idx.size()));
  }
  return out;
}

DofMap DofMap::identity(std::size_t num_vertices) {
  DofMap d;
  d.vertex_to_dof.resize(num_vertices);
  std::iota(d.vertex_to_dof.begin(), d.vertex_to_dof.end(), 0);
  d.num_dofs = static_cast<int>(num_vertices);
  return d;
}

DofMap DofMap::periodic(const Mesh& mesh, std::span<const int> dropped) {
  const std::size_t nv = mesh.vertices.size();
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto unite = [&](int a, int b) {
    if (a < 0 || b < 0) return;
    a = root(a);
    b = root(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (const auto& [l, r] : mesh.periodic_x) unite(l, r);
  for (const auto& [b, t] : mesh.periodic_y) unite(b, t);

  std::vector<char> drop(nv, 0);
  for (int v : dropped) drop[root(v)] = 1;
  DofMap d;
  d.vertex_to_dof.assign(nv, -1);
  std::vector<int> class_dof(nv, -1);
  for (std::size_t v = 0; v < nv; ++v) {
    const int r = root(static_cast<int>(v));
    if (drop[r]) continue;
    if (class_dof[r] < 0) class_dof[r] = d.num_dofs++;
    d.vertex_to_dof[v] = class_dof[r];
  }
  return d;
}

std::vector<double> DofMap::fold(std::span<const double> vertex_values) const {
  std::vector<double> out(static_cast<std::size_t>(num_dofs), 0.0);
  for (std::size_t v = 0; v < vertex_to_dof.size(); ++v)
    if (vertex_to_dof[v] >= 0) out[vertex_to_dof[v]] += vertex_values[v];
  return out;
}

std::vector<double> DofMap::expand(std::span<const double> dof_values, double fill) const {
  std::vector<double> out(vertex_to_dof.size(), fill);
  for (std::size_t v = 0; v < vertex_to_dof.size(); ++v)
    if (vertex_to_dof[v] >= 0) out[v] = dof_values[vertex_to_dof[v]];
  return out;
}

CsrMatrix pattern_from_triangles(const std::vector<Triangle>& triangles, const DofMap& dofs) {
  const int n = dofs.num_dofs;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& t : triangles) {
    for (int a : t) {
      const int ra = dofs.vertex_to_dof[a];
      if (ra < 0) continue;
      for (int b : t) {
        const int rb = dofs.vertex_to_dof[b];
        if (rb >= 0) adj[ra].push_back(rb);
      }
    }
  }
  CsrMatrix m;
  m.rows = m.cols = n;
  m.symmetric = true;
  m.row_ptr.assign(1, 0);
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    m.col_idx.insert(m.col_idx.end(), row.begin(), row.end());
    m.row_ptr.push_back(static_cast<int>(m.col_idx.size()));
  }
  m.values.assign(m.col_idx.size(), 0.0);
  return m;
}

}  // namespace perfhom
