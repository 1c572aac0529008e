#pragma once
// Dense exact linear algebra over the rationals for small matrices: reduced
// row echelon form, kernels, row-space membership with coefficients, and
// characteristic polynomials (Faddeev-LeVerrier).  Used by the classical
// modular-symbols computations, where dimensions stay in the low hundreds.

#include "sl4cohom/zpoly.hpp"

#include <gmpxx.h>

#include <cassert>
#include <vector>

namespace sl4cohom {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>; // row-major

inline QMat q_identity(int n) {
  QMat a(n, QVec(n, 0));
  for (int i = 0; i < n; ++i) a[i][i] = 1;
  return a;
}

inline QMat q_mul(const QMat& a, const QMat& b) {
  if (a.empty() || b.empty()) return {};
  int n = (int)a.size(), m = (int)b[0].size(), k = (int)b.size();
  QMat r(n, QVec(m, 0));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (int j = 0; j < m; ++j)
        if (b[t][j] != 0) r[i][j] += a[i][t] * b[t][j];
    }
  return r;
}

inline QMat q_transpose(const QMat& a) {
  if (a.empty()) return {};
  QMat r(a[0].size(), QVec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}

// reduced row echelon form in place; returns pivot column per kept row
inline std::vector<int> q_rref(QMat& a) {
  std::vector<int> pivots;
  if (a.empty()) return pivots;
  int nrows = (int)a.size(), ncols = (int)a[0].size();
  int row = 0;
  for (int col = 0; col < ncols && row < nrows; ++col) {
    int pr = -1;
    for (int i = row; i < nrows; ++i)
      if (a[i][col] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(a[row], a[pr]);
    mpq_class inv = 1 / a[row][col];
    for (int j = col; j < ncols; ++j) a[row][j] *= inv;
    for (int i = 0; i < nrows; ++i) {
      if (i == row || a[i][col] == 0) continue;
      mpq_class f = a[i][col];
      for (int j = col; j < ncols; ++j) a[i][j] -= f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  a.resize(row, QVec(ncols, 0));
  return pivots;
}

inline int q_rank(QMat a) { return (int)q_rref(a).size(); }

// kernel of the linear map x -> A x; returns basis vectors as rows
inline QMat q_kernel(const QMat& a) {
  if (a.empty()) return {};
  int ncols = (int)a[0].size();
  QMat r = a;
  std::vector<int> pivots = q_rref(r);
  std::vector<int> pivot_of_col(ncols, -1);
  for (std::size_t i = 0; i < pivots.size(); ++i) pivot_of_col[pivots[i]] = (int)i;
  QMat kern;
  for (int col = 0; col < ncols; ++col) {
    if (pivot_of_col[col] >= 0) continue;
    QVec v(ncols, 0);
    v[col] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r[i][col];
    kern.push_back(std::move(v));
  }
  return kern;
}

// Express each row of y as a linear combination of the rows of b (which need
// not be independent is NOT supported: rows of b must be linearly
// independent).  Returns c with y = c * b; asserts solvability.
inline QMat q_solve_rows(const QMat& y, const QMat& b) {
  int nb = (int)b.size();
  QMat r = b;
  QMat e = q_identity(nb); // e * b = r maintained
  std::vector<int> pivots;
  {
    int ncols = r.empty() ? 0 : (int)r[0].size();
    int row = 0;
    for (int col = 0; col < ncols && row < nb; ++col) {
      int pr = -1;
      for (int i = row; i < nb; ++i)
        if (r[i][col] != 0) {
          pr = i;
          break;
        }
      if (pr < 0) continue;
      std::swap(r[row], r[pr]);
      std::swap(e[row], e[pr]);
      mpq_class inv = 1 / r[row][col];
      for (auto& x : r[row]) x *= inv;
      for (auto& x : e[row]) x *= inv;
      for (int i = 0; i < nb; ++i) {
        if (i == row || r[i][col] == 0) continue;
        mpq_class f = r[i][col];
        for (std::size_t j = 0; j < r[i].size(); ++j) r[i][j] -= f * r[row][j];
        for (std::size_t j = 0; j < e[i].size(); ++j) e[i][j] -= f * e[row][j];
      }
      pivots.push_back(col);
      ++row;
    }
    assert((int)pivots.size() == nb && "basis rows must be independent");
  }
  QMat c;
  for (const auto& yrow : y) {
    QVec work = yrow;
    QVec cr(nb, 0);
    for (int i = 0; i < nb; ++i) {
      mpq_class t = work[pivots[i]];
      if (t == 0) continue;
      cr[i] = t;
      for (std::size_t j = 0; j < work.size(); ++j) work[j] -= t * r[i][j];
    }
    for (const auto& x : work) assert(x == 0 && "row not in span of basis");
    // cr expresses yrow over rows of r; convert to rows of b via e
    QVec out(nb, 0);
    for (int i = 0; i < nb; ++i)
      if (cr[i] != 0)
        for (int j = 0; j < nb; ++j) out[j] += cr[i] * e[i][j];
    c.push_back(std::move(out));
  }
  return c;
}

// monic characteristic polynomial, coefficients low-to-high
inline QVec q_charpoly(const QMat& a) {
  int n = (int)a.size();
  QVec c(n + 1, 0);
  c[n] = 1;
  QMat m = q_identity(n);
  for (int k = 1; k <= n; ++k) {
    QMat am = q_mul(a, m);
    mpq_class tr = 0;
    for (int i = 0; i < n; ++i) tr += am[i][i];
    c[n - k] = -tr / k;
    if (k < n) {
      m = std::move(am);
      for (int i = 0; i < n; ++i) m[i][i] += c[n - k];
    }
  }
  return c;
}

inline ZPoly q_charpoly_z(const QMat& a) {
  QVec c = q_charpoly(a);
  ZPoly z(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    mpq_class v = c[i];
    v.canonicalize();
    assert(v.get_den() == 1 && "characteristic polynomial expected integral");
    z[i] = v.get_num();
  }
  z_trim(z);
  return z;
}

} // namespace sl4cohom
