#pragma once
// Integer symmetric 4x4 forms: evaluation, the 10-coordinate packing of the
// space of symmetric matrices, and exact enumeration of short vectors of a
// positive definite integral form (Fincke-Pohst with rational LDL^T).

#include "sl4cohom/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sl4cohom {

// v G v^T for symmetric G
inline i64 qeval(const Mat4& g, const Vec4& v) {
  i128 s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += (i128)v[i] * g[i][j] * v[j];
  assert(s <= INT64_MAX && s >= INT64_MIN);
  return (i64)s;
}

// v^T v as a symmetric matrix
inline Mat4 outer_sym(const Vec4& v) {
  Mat4 m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = v[i] * v[j];
  return m;
}

// coordinates on Sym_4: (a11,a22,a33,a44,a12,a13,a14,a23,a24,a34)
using Sym10 = std::array<i64, 10>;

inline constexpr std::array<std::pair<int, int>, 10> kSymIdx = {{{0, 0},
                                                                 {1, 1},
                                                                 {2, 2},
                                                                 {3, 3},
                                                                 {0, 1},
                                                                 {0, 2},
                                                                 {0, 3},
                                                                 {1, 2},
                                                                 {1, 3},
                                                                 {2, 3}}};
inline constexpr std::array<i64, 10> kSymWeight = {1, 1, 1, 1, 2, 2, 2, 2, 2, 2};

inline Sym10 sym_pack(const Mat4& g) {
  Sym10 a{};
  for (int k = 0; k < 10; ++k) a[k] = g[kSymIdx[k].first][kSymIdx[k].second];
  return a;
}

inline Mat4 sym_unpack(const Sym10& a) {
  Mat4 g{};
  for (int k = 0; k < 10; ++k) {
    auto [i, j] = kSymIdx[k];
    g[i][j] = a[k];
    g[j][i] = a[k];
  }
  return g;
}

// trace pairing Tr(A B) for symmetric A, B in packed coordinates;
// pair_sym(sym_pack(A), sym_pack(outer_sym(v))) == qeval(A, v)
inline i128 pair_sym(const Sym10& a, const Sym10& b) {
  i128 s = 0;
  for (int k = 0; k < 10; ++k) s += (i128)kSymWeight[k] * a[k] * b[k];
  return s;
}

inline bool is_positive_definite(const Mat4& g) {
  if (g[0][0] <= 0) return false;
  if (det2(g[0][0], g[0][1], g[1][0], g[1][1]) <= 0) return false;
  std::array<std::array<i64, 3>, 3> m3{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m3[i][j] = g[i][j];
  if (det3(m3) <= 0) return false;
  return det4(g) > 0;
}

// ---------------------------------------------------------------------------
// Exact short vector enumeration

struct Frac { // reduced fraction, d > 0
  i128 n = 0, d = 1;
};

inline Frac fmake(i128 n, i128 d) {
  assert(d != 0);
  if (d < 0) { d = -d; n = -n; }
  i128 g = gcd128(n, d);
  if (g > 1) { n /= g; d /= g; }
  return {n, d};
}
inline Frac fadd(const Frac& a, const Frac& b) { return fmake(a.n * b.d + b.n * a.d, a.d * b.d); }
inline Frac fsub(const Frac& a, const Frac& b) { return fmake(a.n * b.d - b.n * a.d, a.d * b.d); }
inline Frac fmul(const Frac& a, const Frac& b) { return fmake(a.n * b.n, a.d * b.d); }
inline Frac fdiv(const Frac& a, const Frac& b) { return fmake(a.n * b.d, a.d * b.n); }
inline int fsign(const Frac& a) { return a.n > 0 ? 1 : (a.n < 0 ? -1 : 0); }
inline bool fle(const Frac& a, const Frac& b) { return a.n * b.d <= b.n * a.d; }
inline double fdouble(const Frac& a) { return (double)a.n / (double)a.d; }

// all x with 0 < x G x^T <= bound, one representative per {x,-x},
// sorted lexicographically; pairs (vector, value)
inline std::vector<std::pair<Vec4, i64>> short_vectors(const Mat4& g, i64 bound) {
  assert(is_positive_definite(g));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) assert(std::abs(g[i][j]) <= 100000000LL);
  // LDL^T: Q(x) = sum_i d[i] * (x_i + sum_{j>i} l[i][j] x_j)^2
  Frac d[4];
  Frac l[4][4];
  {
    Frac c[4][4];
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) c[i][j] = fmake(g[i][j], 1);
    for (int i = 0; i < 4; ++i) {
      Frac di = c[i][i];
      for (int k = 0; k < i; ++k)
        di = fsub(di, fmul(d[k], fmul(l[k][i], l[k][i])));
      assert(fsign(di) > 0);
      d[i] = di;
      for (int j = i + 1; j < 4; ++j) {
        Frac v = c[i][j];
        for (int k = 0; k < i; ++k)
          v = fsub(v, fmul(d[k], fmul(l[k][i], l[k][j])));
        l[i][j] = fdiv(v, d[i]);
      }
    }
  }
  std::map<Vec4, i64> found;
  Vec4 x{};
  Frac fb = fmake(bound, 1);
  // recurse levels 3 -> 0; rem = bound - sum_{k>level} d_k (x_k + c_k)^2
  auto rec = [&](auto&& self, int level, Frac rem) -> void {
    if (level < 0) {
      if (!vec_is_zero(x)) {
        i64 val = qeval(g, x);
        assert(val <= bound);
        found.emplace(vec_line_rep(x), val);
      }
      return;
    }
    Frac c = fmake(0, 1);
    for (int j = level + 1; j < 4; ++j)
      if (x[j] != 0) c = fadd(c, fmul(l[level][j], fmake(x[j], 1)));
    double cd = fdouble(c);
    double half = std::sqrt(std::max(0.0, fdouble(rem) / fdouble(d[level])));
    i64 lo = (i64)std::floor(-cd - half) - 1;
    i64 hi = (i64)std::ceil(-cd + half) + 1;
    for (i64 xi = lo; xi <= hi; ++xi) {
      // exact test: d * (xi + c)^2 <= rem
      Frac t = fadd(fmake(xi, 1), c);
      Frac term = fmul(d[level], fmul(t, t));
      if (!fle(term, rem)) continue;
      x[level] = xi;
      self(self, level - 1, fsub(rem, term));
    }
    x[level] = 0;
  };
  rec(rec, 3, fb);
  std::vector<std::pair<Vec4, i64>> out(found.begin(), found.end());
  return out;
}

struct MinVectors {
  i64 min = 0;                // minimum nonzero value of the form
  std::vector<Vec4> vecs;     // one per {v,-v}, lexicographically sorted
};

inline MinVectors minimal_vectors(const Mat4& g) {
  i64 diag_bound = g[0][0];
  for (int i = 1; i < 4; ++i) diag_bound = std::min(diag_bound, g[i][i]);
  auto all = short_vectors(g, diag_bound);
  MinVectors mv;
  mv.min = diag_bound;
  for (auto& [v, val] : all) mv.min = std::min(mv.min, val);
  for (auto& [v, val] : all)
    if (val == mv.min) mv.vecs.push_back(v);
  return mv;
}

} // namespace sl4cohom
