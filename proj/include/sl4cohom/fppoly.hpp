#pragma once
// Univariate polynomial arithmetic over F_p (odd p), characteristic
// polynomials of small dense matrices, and complete factorization into monic
// irreducibles (squarefree split, distinct-degree split, Cantor-Zassenhaus
// equal-degree split).  Degrees here are tiny (matrix sizes < 100), so the
// quadratic-time schoolbook kernels are the right tool.

#include "sl4cohom/sparse.hpp" // mod_pos / mod_pow / mod_inv

#include <cstdint>
#include <random>
#include <vector>

namespace sl4cohom {

// coefficients low-to-high, normalized: no trailing zeros, values in [0, p)
using FpPoly = std::vector<std::int64_t>;

inline void fp_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int fp_deg(const FpPoly& a) { return (int)a.size() - 1; } // -1 for zero

inline FpPoly fp_add(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::int64_t s = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    r[i] = s >= p ? s - p : s;
  }
  fp_trim(r);
  return r;
}

inline FpPoly fp_sub(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::int64_t s = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
    r[i] = s < 0 ? s + p : s;
  }
  fp_trim(r);
  return r;
}

inline FpPoly fp_scale(FpPoly a, std::int64_t c, std::int64_t p) {
  c = mod_pos(c, p);
  for (auto& x : a) x = x * c % p;
  fp_trim(a);
  return a;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  fp_trim(r);
  return r;
}

// division with remainder: a = q * b + r
inline void fp_divmod(FpPoly a, const FpPoly& b, std::int64_t p, FpPoly& q, FpPoly& r) {
  q.clear();
  if (fp_deg(a) < fp_deg(b)) {
    r = std::move(a);
    return;
  }
  q.assign(a.size() - b.size() + 1, 0);
  std::int64_t inv = mod_inv(b.back(), p);
  for (int i = (int)a.size() - 1; i >= (int)b.size() - 1; --i) {
    if (!a[i]) continue;
    std::int64_t c = a[i] * inv % p;
    q[i - (int)b.size() + 1] = c;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::size_t k = i - b.size() + 1 + j;
      a[k] = mod_pos(a[k] - c * b[j], p);
    }
  }
  fp_trim(a);
  r = std::move(a);
}

inline FpPoly fp_mod(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  FpPoly q, r;
  fp_divmod(a, b, p, q, r);
  return r;
}

inline FpPoly fp_monic(FpPoly a, std::int64_t p) {
  if (a.empty()) return a;
  return fp_scale(std::move(a), mod_inv(a.back(), p), p);
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, std::int64_t p) {
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(std::move(a), p);
}

inline FpPoly fp_derivative(const FpPoly& a, std::int64_t p) {
  if (a.size() <= 1) return {};
  FpPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * (std::int64_t)(i % p) % p;
  fp_trim(r);
  return r;
}

// base^e modulo f
inline FpPoly fp_powmod(FpPoly base, std::int64_t e, const FpPoly& f, std::int64_t p) {
  FpPoly r{1};
  base = fp_mod(base, f, p);
  while (e) {
    if (e & 1) r = fp_mod(fp_mul(r, base, p), f, p);
    base = fp_mod(fp_mul(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

inline std::int64_t fp_eval(const FpPoly& a, std::int64_t x, std::int64_t p) {
  std::int64_t r = 0;
  x = mod_pos(x, p);
  for (int i = (int)a.size() - 1; i >= 0; --i) r = (r * x + a[i]) % p;
  return r;
}

struct FpFactor {
  FpPoly poly; // monic irreducible
  int mult = 0;
};

namespace detail {

// split a product of distinct irreducibles all of degree d (Cantor-Zassenhaus)
inline void equal_degree_split(const FpPoly& f, int d, std::int64_t p, std::mt19937_64& rng,
                               std::vector<FpPoly>& out) {
  int n = fp_deg(f);
  if (n == d) {
    out.push_back(f);
    return;
  }
  std::uniform_int_distribution<std::int64_t> coef(0, p - 1);
  while (true) {
    FpPoly a(n, 0);
    for (auto& x : a) x = coef(rng);
    fp_trim(a);
    if (fp_deg(a) < 1) continue;
    // gcd may already split off a factor
    FpPoly g = fp_gcd(f, a, p);
    if (fp_deg(g) > 0 && fp_deg(g) < n) {
      equal_degree_split(g, d, p, rng, out);
      FpPoly q, r;
      fp_divmod(f, g, p, q, r);
      equal_degree_split(q, d, p, rng, out);
      return;
    }
    // a^((p^d - 1)/2) mod f is +-1 on each irreducible component; mixed signs split f
    FpPoly b = std::move(a);
    std::int64_t e0 = (p - 1) / 2;
    // compute a^((p^d-1)/2) = a^(e0 * (1 + p + ... + p^(d-1))) via d-fold Frobenius ladder
    FpPoly acc = fp_powmod(b, e0, f, p);
    FpPoly term = acc;
    for (int i = 1; i < d; ++i) {
      term = fp_powmod(term, p, f, p);
      acc = fp_mod(fp_mul(acc, term, p), f, p);
    }
    FpPoly shifted = acc;
    if (shifted.empty())
      shifted = FpPoly{p - 1};
    else
      shifted[0] = mod_pos(shifted[0] - 1, p);
    fp_trim(shifted);
    g = fp_gcd(f, shifted, p);
    if (fp_deg(g) > 0 && fp_deg(g) < n) {
      equal_degree_split(g, d, p, rng, out);
      FpPoly q, r;
      fp_divmod(f, g, p, q, r);
      equal_degree_split(q, d, p, rng, out);
      return;
    }
  }
}

} // namespace detail

// complete factorization of a nonzero polynomial into monic irreducibles with
// multiplicities (the unit leading coefficient is dropped)
inline std::vector<FpFactor> fp_factor(FpPoly f, std::int64_t p, std::uint64_t seed = 12345) {
  std::vector<FpFactor> out;
  f = fp_monic(std::move(f), p);
  if (fp_deg(f) < 1) return out;
  std::mt19937_64 rng(seed);
  // squarefree part loop: peel gcd(f, f') repeatedly (p larger than any degree
  // here, so f' = 0 cannot occur for nonconstant f)
  int mult_base = 1;
  while (fp_deg(f) >= 1) {
    FpPoly g = fp_gcd(f, fp_derivative(f, p), p);
    FpPoly sqfree, r;
    fp_divmod(f, g, p, sqfree, r); // f / gcd: product of distinct irreducibles of f
    // distinct-degree split of sqfree
    FpPoly work = sqfree;
    FpPoly xp{0, 1}; // will hold x^(p^d) mod work
    for (int d = 1; fp_deg(work) >= 1 && d <= fp_deg(work); ++d) {
      xp = fp_powmod(xp, p, work, p);
      FpPoly diff = fp_sub(xp, FpPoly{0, 1}, p);
      FpPoly gd = fp_gcd(work, diff, p);
      if (fp_deg(gd) > 0) {
        std::vector<FpPoly> irred;
        detail::equal_degree_split(gd, d, p, rng, irred);
        for (auto& q : irred) {
          // multiplicity of q in the ORIGINAL f at this layer: count divisions
          int m = 0;
          FpPoly quo, rem;
          while (true) {
            fp_divmod(f, q, p, quo, rem);
            if (!rem.empty()) break;
            f = quo;
            ++m;
          }
          out.push_back({q, m * mult_base});
        }
        FpPoly quo, rem;
        fp_divmod(work, gd, p, quo, rem);
        work = std::move(quo);
        xp = fp_mod(xp, work, p);
      }
      if (fp_deg(work) >= 1 && 2 * (d + 1) > fp_deg(work) + 1) break;
    }
    if (fp_deg(work) >= 1) {
      // remaining work is irreducible
      int m = 0;
      FpPoly quo, rem;
      while (true) {
        fp_divmod(f, work, p, quo, rem);
        if (!rem.empty()) break;
        f = quo;
        ++m;
      }
      out.push_back({work, m * mult_base});
    }
    if (fp_deg(f) < 1) break;
  }
  std::sort(out.begin(), out.end(), [](const FpFactor& a, const FpFactor& b) {
    if (a.poly.size() != b.poly.size()) return a.poly.size() < b.poly.size();
    for (int i = (int)a.poly.size() - 1; i >= 0; --i)
      if (a.poly[i] != b.poly[i]) return a.poly[i] < b.poly[i];
    return a.mult < b.mult;
  });
  return out;
}

// roots in F_p of f, with multiplicities
inline std::vector<std::pair<std::int64_t, int>> fp_roots(const FpPoly& f, std::int64_t p) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (const auto& fac : fp_factor(f, p))
    if (fp_deg(fac.poly) == 1) out.push_back({mod_pos(-fac.poly[0], p), fac.mult});
  return out;
}

// ---- small dense matrices over F_p ----

using FpMat = std::vector<std::vector<std::int64_t>>;

inline FpMat fp_mat_mul(const FpMat& a, const FpMat& b, std::int64_t p) {
  int n = (int)a.size(), m = (int)b[0].size(), k = (int)b.size();
  FpMat r(n, std::vector<std::int64_t>(m, 0));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < k; ++t) {
      if (!a[i][t]) continue;
      std::int64_t c = a[i][t];
      for (int j = 0; j < m; ++j) r[i][j] = (r[i][j] + c * b[t][j]) % p;
    }
  return r;
}

inline std::int64_t fp_mat_det(FpMat a, std::int64_t p) {
  int n = (int)a.size();
  std::int64_t det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (a[i][col]) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = p - det;
    }
    det = det * a[col][col] % p;
    std::int64_t inv = mod_inv(a[col][col], p);
    for (int i = col + 1; i < n; ++i) {
      if (!a[i][col]) continue;
      std::int64_t f = a[i][col] * inv % p;
      for (int j = col; j < n; ++j) a[i][j] = mod_pos(a[i][j] - f * a[col][j], p);
    }
  }
  return det % p;
}

// characteristic polynomial det(x I - a) by evaluation at deg+1 points plus
// Lagrange interpolation (requires p > n, always true here)
inline FpPoly fp_charpoly(const FpMat& a, std::int64_t p) {
  int n = (int)a.size();
  if (n == 0) return FpPoly{1};
  std::vector<std::int64_t> xs(n + 1), ys(n + 1);
  for (int t = 0; t <= n; ++t) {
    xs[t] = t;
    FpMat m = a;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        m[i][j] = mod_pos(-m[i][j], p);
        if (i == j) m[i][j] = (m[i][j] + t) % p;
      }
    ys[t] = fp_mat_det(std::move(m), p);
  }
  // Lagrange: sum_t ys[t] * prod_{s != t} (x - xs[s]) / (xs[t] - xs[s])
  FpPoly result;
  for (int t = 0; t <= n; ++t) {
    if (!ys[t]) continue;
    FpPoly num{1};
    std::int64_t den = 1;
    for (int s = 0; s <= n; ++s) {
      if (s == t) continue;
      num = fp_mul(num, FpPoly{mod_pos(-xs[s], p), 1}, p);
      den = den * mod_pos(xs[t] - xs[s], p) % p;
    }
    result = fp_add(result, fp_scale(std::move(num), ys[t] * mod_inv(den, p) % p, p), p);
  }
  return result;
}

// kernel basis of a (possibly non-square) dense matrix, vectors as rows
inline FpMat fp_mat_kernel(FpMat a, std::int64_t p) {
  int m = (int)a.size(), n = m ? (int)a[0].size() : 0;
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int piv = -1;
    for (int i = rank; i < m; ++i)
      if (a[i][col]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[piv], a[rank]);
    std::int64_t inv = mod_inv(a[rank][col], p);
    for (int j = col; j < n; ++j) a[rank][j] = a[rank][j] * inv % p;
    for (int i = 0; i < m; ++i) {
      if (i == rank || !a[i][col]) continue;
      std::int64_t f = a[i][col];
      for (int j = col; j < n; ++j) a[i][j] = mod_pos(a[i][j] - f * a[rank][j], p);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<char> is_piv(n, 0);
  for (int c : pivot_col) is_piv[c] = 1;
  FpMat kernel;
  for (int f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    std::vector<std::int64_t> v(n, 0);
    v[f] = 1;
    for (int i = 0; i < rank; ++i) v[pivot_col[i]] = mod_pos(-a[i][f], p);
    kernel.push_back(std::move(v));
  }
  return kernel;
}

// evaluate a polynomial at a square matrix
inline FpMat fp_poly_at_mat(const FpPoly& f, const FpMat& a, std::int64_t p) {
  int n = (int)a.size();
  FpMat r(n, std::vector<std::int64_t>(n, 0));
  FpMat pw(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n; ++i) pw[i][i] = 1;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k])
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i][j] = (r[i][j] + f[k] * pw[i][j]) % p;
    if (k + 1 < f.size()) pw = fp_mat_mul(pw, a, p);
  }
  return r;
}

} // namespace sl4cohom
