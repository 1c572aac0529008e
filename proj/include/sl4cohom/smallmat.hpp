#pragma once
// Exact integer linear algebra on small dense matrices: 4x4 kernels used for
// group elements of SL(4,Z), generic m x n Hermite normal forms used to
// canonicalize point configurations, and fraction-free (Bareiss) elimination
// for ranks and integer nullspace bases of small rational systems.

#include <array>
#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

namespace sl4cohom {

using i64 = std::int64_t;
using i128 = __int128;

using Vec4 = std::array<i64, 4>;
using Mat4 = std::array<Vec4, 4>; // row-major: m[r][c]

inline Mat4 mat_identity() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1;
  return m;
}

inline bool operator==(const Mat4& a, const Mat4& b) {
  for (int i = 0; i < 4; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// row vector times matrix: (v M)_j = sum_i v_i m[i][j]
inline Vec4 vec_mul(const Vec4& v, const Mat4& m) {
  Vec4 r{};
  for (int j = 0; j < 4; ++j) {
    i128 s = 0;
    for (int i = 0; i < 4; ++i) s += (i128)v[i] * m[i][j];
    assert(s <= INT64_MAX && s >= INT64_MIN);
    r[j] = (i64)s;
  }
  return r;
}

inline Mat4 mat_mul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      i128 s = 0;
      for (int k = 0; k < 4; ++k) s += (i128)a[i][k] * b[k][j];
      assert(s <= INT64_MAX && s >= INT64_MIN);
      r[i][j] = (i64)s;
    }
  return r;
}

inline Mat4 mat_transpose(const Mat4& a) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = a[j][i];
  return r;
}

inline i64 det2(i64 a, i64 b, i64 c, i64 d) {
  i128 v = (i128)a * d - (i128)b * c;
  assert(v <= INT64_MAX && v >= INT64_MIN);
  return (i64)v;
}

inline i64 det3(const std::array<std::array<i64, 3>, 3>& m) {
  i128 v = (i128)m[0][0] * det2(m[1][1], m[1][2], m[2][1], m[2][2]) -
           (i128)m[0][1] * det2(m[1][0], m[1][2], m[2][0], m[2][2]) +
           (i128)m[0][2] * det2(m[1][0], m[1][1], m[2][0], m[2][1]);
  assert(v <= INT64_MAX && v >= INT64_MIN);
  return (i64)v;
}

inline i64 det4(const Mat4& m) {
  i128 acc = 0;
  for (int j = 0; j < 4; ++j) {
    std::array<std::array<i64, 3>, 3> minor{};
    for (int r = 1; r < 4; ++r) {
      int cc = 0;
      for (int c = 0; c < 4; ++c) {
        if (c == j) continue;
        minor[r - 1][cc++] = m[r][c];
      }
    }
    i128 term = (i128)m[0][j] * det3(minor);
    acc += (j % 2 == 0) ? term : -term;
  }
  assert(acc <= INT64_MAX && acc >= INT64_MIN);
  return (i64)acc;
}

// adj(m) with m * adj(m) = det(m) * I
inline Mat4 adjugate4(const Mat4& m) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::array<std::array<i64, 3>, 3> minor{};
      int rr = 0;
      for (int a = 0; a < 4; ++a) {
        if (a == i) continue;
        int cc = 0;
        for (int b = 0; b < 4; ++b) {
          if (b == j) continue;
          minor[rr][cc++] = m[a][b];
        }
        ++rr;
      }
      i64 cof = det3(minor);
      r[j][i] = ((i + j) % 2 == 0) ? cof : -cof; // transpose of cofactors
    }
  return r;
}

// inverse of a matrix with det = +-1
inline Mat4 mat_inverse_unimodular(const Mat4& m) {
  i64 d = det4(m);
  assert(d == 1 || d == -1);
  Mat4 adj = adjugate4(m);
  if (d == -1)
    for (auto& row : adj)
      for (auto& x : row) x = -x;
  return adj;
}

inline i64 vec_content(const Vec4& v) {
  i64 g = 0;
  for (i64 x : v) g = std::gcd(g, std::abs(x));
  return g;
}

// divide out the content; zero vector stays zero
inline Vec4 vec_primitive(Vec4 v) {
  i64 g = vec_content(v);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

// representative of {v, -v}: first nonzero coordinate positive
inline Vec4 vec_line_rep(Vec4 v) {
  for (i64 x : v) {
    if (x > 0) return v;
    if (x < 0) {
      for (auto& y : v) y = -y;
      return v;
    }
  }
  return v;
}

inline bool vec_is_zero(const Vec4& v) {
  return v[0] == 0 && v[1] == 0 && v[2] == 0 && v[3] == 0;
}

// ---------------------------------------------------------------------------
// Generic integer matrices (small, dense)

using IMat = std::vector<std::vector<i64>>; // rows

inline int imat_rows(const IMat& a) { return (int)a.size(); }
inline int imat_cols(const IMat& a) { return a.empty() ? 0 : (int)a[0].size(); }

// Row-style Hermite normal form: returns H = U * A with U unimodular.
// Pivots are positive, entries above a pivot are reduced into [0, pivot),
// pivot columns are strictly increasing, zero rows trail.  Optionally
// accumulates U (m x m).
inline IMat hnf_rows(IMat a, IMat* u_out = nullptr) {
  int m = imat_rows(a), n = imat_cols(a);
  IMat u;
  if (u_out) {
    u.assign(m, std::vector<i64>(m, 0));
    for (int i = 0; i < m; ++i) u[i][i] = 1;
  }
  auto row_axpy = [&](IMat& mat, int dst, int src, i64 q) {
    for (size_t j = 0; j < mat[dst].size(); ++j) {
      i128 v = (i128)mat[dst][j] - (i128)q * mat[src][j];
      assert(v <= INT64_MAX && v >= INT64_MIN);
      mat[dst][j] = (i64)v;
    }
  };
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    // gcd chain: clear entries below `row` in this column
    while (true) {
      int piv = -1;
      for (int i = row; i < m; ++i)
        if (a[i][col] != 0 && (piv < 0 || std::abs(a[i][col]) < std::abs(a[piv][col]))) piv = i;
      if (piv < 0) break;
      if (piv != row) {
        std::swap(a[piv], a[row]);
        if (u_out) std::swap(u[piv], u[row]);
      }
      bool done = true;
      for (int i = row + 1; i < m; ++i) {
        if (a[i][col] == 0) continue;
        i64 q = a[i][col] / a[row][col];
        row_axpy(a, i, row, q);
        if (u_out) row_axpy(u, i, row, q);
        if (a[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (a[row][col] == 0) continue;
    if (a[row][col] < 0) {
      for (auto& x : a[row]) x = -x;
      if (u_out)
        for (auto& x : u[row]) x = -x;
    }
    // reduce entries above the pivot into [0, pivot)
    for (int i = 0; i < row; ++i) {
      i64 q = a[i][col] / a[row][col];
      if (a[i][col] % a[row][col] < 0) q -= 1; // floor division
      if (q != 0) {
        row_axpy(a, i, row, q);
        if (u_out) row_axpy(u, i, row, q);
      }
    }
    ++row;
  }
  if (u_out) *u_out = std::move(u);
  return a;
}

inline int hnf_rank(const IMat& h) {
  int r = 0;
  for (const auto& row : h) {
    bool nz = false;
    for (i64 x : row)
      if (x != 0) { nz = true; break; }
    if (nz) ++r;
  }
  return r;
}

// Completes a primitive row vector v to a matrix in SL(4,Z) whose LAST row
// is v.  Deterministic.
inline Mat4 complete_to_sl4(const Vec4& v) {
  assert(vec_content(v) == 1);
  IMat a{{v[0], v[1], v[2], v[3]}};
  // work on columns via the transpose trick: hnf_rows of the 4x1 matrix v^T
  IMat vt{{v[0]}, {v[1]}, {v[2]}, {v[3]}};
  IMat u;
  IMat h = hnf_rows(vt, &u); // u * v^T = (1,0,0,0)^T since v primitive
  assert(h[0][0] == 1 && h[1][0] == 0 && h[2][0] == 0 && h[3][0] == 0);
  // v = (1,0,0,0) * (u^{-1})^T => first row of (u^{-1})^T is v... transpose:
  // u * v^T = e1^T  =>  v^T = u^{-1} e1  =>  v is the first column of u^{-1},
  // read as a row of (u^{-1})^T.
  Mat4 um{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) um[i][j] = u[i][j];
  Mat4 uinv = mat_inverse_unimodular(um);
  Mat4 b = mat_transpose(uinv); // first ROW of b is v
  assert((b[0] == v));
  // rotate rows so v is last: (r0,r1,r2,r3) -> (r1,r2,r3,r0); a 4-cycle flips det
  Mat4 g{b[1], b[2], b[3], b[0]};
  if (det4(g) == -1)
    for (auto& x : g[0]) x = -x;
  assert(det4(g) == 1 && g[3] == v);
  return g;
}

// ---------------------------------------------------------------------------
// Fraction-free elimination (Bareiss) for exact ranks / nullspaces of small
// integer matrices.  Entries and all intermediate minors must fit in i128.

struct BareissResult {
  int rank = 0;
  std::vector<int> pivot_cols;
  std::vector<std::vector<i128>> reduced; // echelon form (fraction-free)
};

inline BareissResult bareiss_echelon(const IMat& a0) {
  int m = imat_rows(a0), n = imat_cols(a0);
  std::vector<std::vector<i128>> a(m, std::vector<i128>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = a0[i][j];
  BareissResult res;
  i128 prev = 1;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int piv = -1;
    for (int i = row; i < m; ++i)
      if (a[i][col] != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != row) std::swap(a[piv], a[row]);
    for (int i = row + 1; i < m; ++i) {
      for (int j = col + 1; j < n; ++j) {
        i128 num = a[row][col] * a[i][j] - a[i][col] * a[row][j];
        a[i][j] = num / prev; // exact by Bareiss identity
      }
      a[i][col] = 0;
    }
    prev = a[row][col];
    res.pivot_cols.push_back(col);
    ++row;
  }
  res.rank = row;
  res.reduced = std::move(a);
  return res;
}

inline int imat_rank(const IMat& a) { return bareiss_echelon(a).rank; }

// sign of the determinant of a small square integer matrix (Bareiss, exact)
inline int sign_det(std::vector<std::vector<i128>> a) {
  int n = (int)a.size();
  int sign = 1;
  i128 prev = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (a[i][col] != 0) { piv = i; break; }
    if (piv < 0) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      sign = -sign;
    }
    for (int i = col + 1; i < n; ++i) {
      for (int j = col + 1; j < n; ++j)
        a[i][j] = (a[col][col] * a[i][j] - a[i][col] * a[col][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[col][col];
  }
  return a[n - 1][n - 1] > 0 ? sign : -sign;
}

inline i128 gcd128(i128 x, i128 y) {
  if (x < 0) x = -x;
  if (y < 0) y = -y;
  while (y) { i128 t = x % y; x = y; y = t; }
  return x;
}

// Integer basis of the right nullspace {x : A x = 0}, one primitive integer
// vector per free column.  Columns are the "variables".
inline IMat imat_nullspace(const IMat& a) {
  int n = imat_cols(a);
  BareissResult be = bareiss_echelon(a);
  std::vector<bool> is_pivot(n, false);
  for (int c : be.pivot_cols) is_pivot[c] = true;
  IMat basis;
  for (int free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    // back-substitute; x_j held as num[j]/den[j] in i128
    std::vector<i128> num(n, 0), den(n, 1);
    num[free_col] = 1;
    for (int r = be.rank - 1; r >= 0; --r) {
      int pc = be.pivot_cols[r];
      i128 sn = 0, sd = 1; // running sum a[r][j] * x_j over j > pc
      for (int j = pc + 1; j < n; ++j) {
        if (be.reduced[r][j] == 0 || num[j] == 0) continue;
        i128 tn = be.reduced[r][j] * num[j], td = den[j];
        sn = sn * td + tn * sd;
        sd = sd * td;
        i128 g = gcd128(sn, sd);
        if (g > 1) { sn /= g; sd /= g; }
      }
      if (sn != 0) {
        num[pc] = -sn;
        den[pc] = sd * be.reduced[r][pc];
        i128 g = gcd128(num[pc], den[pc]);
        if (g > 1) { num[pc] /= g; den[pc] /= g; }
        if (den[pc] < 0) { den[pc] = -den[pc]; num[pc] = -num[pc]; }
      }
    }
    // scale by lcm of denominators, then divide by content
    i128 l = 1;
    for (int j = 0; j < n; ++j)
      if (num[j] != 0) l = l / gcd128(l, den[j]) * den[j];
    std::vector<i64> row(n);
    i128 g = 0;
    for (int j = 0; j < n; ++j) {
      i128 val = (num[j] == 0) ? 0 : num[j] * (l / den[j]);
      g = gcd128(g, val);
      assert(val <= INT64_MAX && val >= INT64_MIN);
      row[j] = (i64)val;
    }
    if (g > 1)
      for (auto& x : row) x = (i64)((i128)x / g);
    basis.push_back(std::move(row));
  }
  return basis;
}

} // namespace sl4cohom
