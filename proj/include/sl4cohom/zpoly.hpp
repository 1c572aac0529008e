#pragma once
// Integer polynomial arithmetic (gmp coefficients) and factorization of monic
// integer polynomials into monic irreducibles: factor modulo a prime that
// keeps the polynomial squarefree, Hensel-lift the modular factors past the
// Landau-Mignotte coefficient bound, then recombine factor subsets.  Degrees
// in this project stay small (characteristic polynomials of Hecke operators on
// spaces of dimension < 100), so subset recombination is cheap.

#include "sl4cohom/fppoly.hpp"

#include <gmpxx.h>

#include <stdexcept>

namespace sl4cohom {

// coefficients low-to-high, no trailing zeros
using ZPoly = std::vector<mpz_class>;

inline void z_trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int z_deg(const ZPoly& a) { return (int)a.size() - 1; }

inline ZPoly z_add(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  z_trim(r);
  return r;
}

inline ZPoly z_neg(ZPoly a) {
  for (auto& x : a) x = -x;
  return a;
}

inline ZPoly z_sub(const ZPoly& a, const ZPoly& b) { return z_add(a, z_neg(b)); }

inline ZPoly z_mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  z_trim(r);
  return r;
}

inline ZPoly z_scale(ZPoly a, const mpz_class& c) {
  for (auto& x : a) x *= c;
  z_trim(a);
  return a;
}

// exact division by a monic divisor; asserts exactness
inline ZPoly z_div_exact_monic(ZPoly a, const ZPoly& b) {
  assert(!b.empty() && b.back() == 1);
  if (z_deg(a) < z_deg(b)) {
    assert(a.empty());
    return {};
  }
  ZPoly q(a.size() - b.size() + 1, 0);
  for (int i = (int)a.size() - 1; i >= (int)b.size() - 1; --i) {
    mpz_class c = a[i];
    if (c == 0) continue;
    q[i - (int)b.size() + 1] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[i - b.size() + 1 + j] -= c * b[j];
  }
  for (const auto& x : a) assert(x == 0 && "division must be exact");
  z_trim(q);
  return q;
}

// remainder of a modulo monic b (exact integer arithmetic)
inline ZPoly z_mod_monic(ZPoly a, const ZPoly& b) {
  assert(!b.empty() && b.back() == 1);
  for (int i = (int)a.size() - 1; i >= (int)b.size() - 1; --i) {
    mpz_class c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[i - b.size() + 1 + j] -= c * b[j];
  }
  z_trim(a);
  return a;
}

inline bool z_divides_monic(const ZPoly& b, const ZPoly& a) {
  if (a.empty()) return true;
  if (z_deg(a) < z_deg(b)) return false;
  return z_mod_monic(a, b).empty();
}

inline mpz_class z_eval(const ZPoly& a, const mpz_class& x) {
  mpz_class r = 0;
  for (int i = (int)a.size() - 1; i >= 0; --i) r = r * x + a[i];
  return r;
}

inline FpPoly z_to_fp(const ZPoly& a, std::int64_t p) {
  FpPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    mpz_class m = a[i] % p;
    r[i] = mod_pos(m.get_si(), p);
  }
  fp_trim(r);
  return r;
}

// monic gcd over Q of integer polynomials (result has integer coefficients by
// Gauss's lemma whenever both inputs are integral and one is monic); computed
// with exact rational arithmetic — degrees here are tiny
inline ZPoly z_gcd_monicized(const ZPoly& a, const ZPoly& b) {
  using QPoly = std::vector<mpq_class>;
  auto to_q = [](const ZPoly& z) {
    QPoly q(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) q[i] = z[i];
    return q;
  };
  auto trim = [](QPoly& x) {
    while (!x.empty() && x.back() == 0) x.pop_back();
  };
  QPoly r0 = to_q(a), r1 = to_q(b);
  trim(r0);
  trim(r1);
  while (!r1.empty()) {
    // r0 mod r1
    QPoly x = r0;
    for (int i = (int)x.size() - 1; i >= (int)r1.size() - 1; --i) {
      if (x[i] == 0) continue;
      mpq_class c = x[i] / r1.back();
      for (std::size_t j = 0; j < r1.size(); ++j) x[i - r1.size() + 1 + j] -= c * r1[j];
    }
    trim(x);
    r0 = std::move(r1);
    r1 = std::move(x);
  }
  if (r0.empty()) return {};
  ZPoly g(r0.size());
  mpq_class lead = r0.back();
  for (std::size_t i = 0; i < r0.size(); ++i) {
    mpq_class c = r0[i] / lead;
    c.canonicalize();
    assert(c.get_den() == 1 && "monic gcd of integral inputs must be integral");
    g[i] = c.get_num();
  }
  return g;
}

namespace detail {

// Solve a * h ≡ d (mod g, p^k) for a with deg a < deg g, digit by digit in
// base p.  Requires gcd(h, g) = 1 mod p and g monic.  Only mod-p inversions
// are used.
inline ZPoly solve_padic(const ZPoly& d, const ZPoly& h, const ZPoly& g, std::int64_t p,
                         int k) {
  // u = h^{-1} mod (g, p) via F_p[x] extended Euclid
  FpPoly gp = z_to_fp(g, p), hp = z_to_fp(z_mod_monic(h, g), p);
  FpPoly r0 = gp, r1 = hp, u0{}, u1{1};
  while (!r1.empty() && fp_deg(r1) > 0) {
    FpPoly q, r2;
    fp_divmod(r0, r1, p, q, r2);
    FpPoly u2 = fp_sub(u0, fp_mul(q, u1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r2);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  assert(!r1.empty() && "h must be invertible mod (g, p)");
  FpPoly u = fp_scale(u1, mod_inv(r1[0], p), p);
  ZPoly a;                          // accumulated solution
  ZPoly rem = z_mod_monic(d, g);    // current residual target
  ZPoly hg = z_mod_monic(h, g);     // h reduced mod g
  mpz_class pt = 1;                 // p^t
  mpz_class pk = 1;
  for (int i = 0; i < k; ++i) pk *= p;
  for (int t = 0; t < k; ++t) {
    FpPoly rp = z_to_fp(rem, p);
    FpPoly at = fp_mod(fp_mul(rp, u, p), gp, p);
    ZPoly atz(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) atz[i] = at[i];
    // a += p^t * at
    ZPoly scaled = atz;
    for (auto& x : scaled) x *= pt;
    a = z_add(a, scaled);
    // rem = (rem - at * h mod g) / p, keeping coefficients reduced mod p^(k-t)
    ZPoly next = z_mod_monic(z_sub(rem, z_mul(atz, hg)), g);
    for (auto& x : next) {
      assert(x % p == 0);
      x /= p;
    }
    z_trim(next);
    mpz_class window = pk / pt / p; // p^(k - t - 1)
    if (window > 1)
      for (auto& x : next) {
        x %= window;
        if (x < 0) x += window;
      }
    rem = std::move(next);
    pt *= p;
  }
  for (auto& x : a) {
    x %= pk;
    if (x < 0) x += pk;
  }
  z_trim(a);
  return a;
}

// Hensel tower: quadratic lift of the full factor list from mod p to mod
// p^(2^(levels-1)).
inline std::vector<ZPoly> hensel_lift(const ZPoly& target, const std::vector<FpPoly>& base,
                                      std::int64_t p, int levels) {
  std::vector<ZPoly> cur;
  for (const auto& f : base) {
    ZPoly z(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) z[i] = f[i];
    cur.push_back(std::move(z));
  }
  mpz_class m = p;
  int k = 1; // m = p^k
  for (int level = 1; level < levels; ++level) {
    mpz_class m2 = m * m;
    std::vector<ZPoly> next;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      ZPoly h{1};
      for (std::size_t j = 0; j < cur.size(); ++j) {
        if (j == i) continue;
        h = z_mul(h, cur[j]);
        for (auto& x : h) {
          x %= m2;
          if (x < 0) x += m2;
        }
      }
      ZPoly err = z_sub(target, z_mul(cur[i], h));
      for (auto& x : err) {
        x %= m2;
        if (x < 0) x += m2;
      }
      z_trim(err);
      ZPoly d = err;
      for (auto& x : d) {
        assert(x % m == 0);
        x /= m;
      }
      z_trim(d);
      // correction A with A*h ≡ d (mod g_i, m); then g_i' = g_i + m*A
      ZPoly acoef = solve_padic(d, h, cur[i], p, k);
      ZPoly g_new = cur[i];
      if (acoef.size() > g_new.size()) g_new.resize(acoef.size(), 0);
      for (std::size_t t = 0; t < acoef.size(); ++t) {
        g_new[t] += m * acoef[t];
        g_new[t] %= m2;
        if (g_new[t] < 0) g_new[t] += m2;
      }
      z_trim(g_new);
      next.push_back(std::move(g_new));
    }
    cur = std::move(next);
    m = m2;
    k *= 2;
  }
  return cur;
}

// product over picked lifted factors, coefficients reduced to the symmetric
// range (-m/2, m/2]
inline ZPoly product_mod_symmetric(const std::vector<int>& pick, const mpz_class& m,
                                   const std::vector<ZPoly>& lifted) {
  ZPoly prod{1};
  for (int idx : pick) {
    const ZPoly& f = lifted[idx];
    ZPoly next(prod.size() + f.size() - 1, 0);
    for (std::size_t i = 0; i < prod.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) {
        next[i + j] += prod[i] * f[j];
        next[i + j] %= m;
      }
    prod = std::move(next);
  }
  mpz_class half = m / 2;
  for (auto& x : prod) {
    x %= m;
    if (x < 0) x += m;
    if (x > half) x -= m;
  }
  z_trim(prod);
  return prod;
}

} // namespace detail

struct ZFactor {
  ZPoly poly; // monic irreducible over Z
  int mult = 0;
};

// factorization of a monic integer polynomial into monic irreducibles
inline std::vector<ZFactor> z_factor_monic(const ZPoly& f_in) {
  assert(!f_in.empty() && f_in.back() == 1);
  std::vector<ZFactor> out;
  if (z_deg(f_in) == 0) return out;
  // squarefree part over Z (monic by construction)
  ZPoly deriv(f_in.size() - 1);
  for (std::size_t i = 1; i < f_in.size(); ++i) deriv[i - 1] = f_in[i] * (long)i;
  z_trim(deriv);
  ZPoly rep = z_gcd_monicized(f_in, deriv);
  ZPoly sqf = rep.size() <= 1 ? f_in : z_div_exact_monic(f_in, rep);
  static const std::int64_t kPrimes[] = {10007, 10009, 10037, 10039, 10061, 10067,
                                         10069, 10079, 10091, 10093, 10099, 10103};
  for (std::int64_t p : kPrimes) {
    FpPoly fp = z_to_fp(sqf, p);
    if (fp_deg(fp) != z_deg(sqf)) continue;
    if (fp_deg(fp_gcd(fp, fp_derivative(fp, p), p)) != 0) continue; // not squarefree mod p
    auto facs = fp_factor(fp, p);
    std::vector<FpPoly> base;
    for (auto& fc : facs) {
      assert(fc.mult == 1);
      base.push_back(fc.poly);
    }
    // Landau-Mignotte-style coefficient bound for monic factors of sqf
    mpz_class height = 0;
    for (const auto& c : sqf)
      if (abs(c) > height) height = abs(c);
    mpz_class bound = (height + 1) * (z_deg(sqf) + 1);
    bound <<= (z_deg(sqf) + 2);
    int levels = 1;
    mpz_class pe = p;
    while (pe <= 2 * bound) {
      pe = pe * pe;
      levels += 1;
    }
    std::vector<ZPoly> lifted = detail::hensel_lift(sqf, base, p, levels);
    mpz_class m = p;
    for (int i = 1; i < levels; ++i) m = m * m;
    // subset recombination against the squarefree part, smallest subsets first
    std::vector<int> alive(lifted.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = (int)i;
    ZPoly rem = sqf;
    std::vector<ZPoly> irreducibles;
    while (!alive.empty()) {
      bool found = false;
      for (int take = 1; take <= (int)alive.size() && !found; ++take) {
        std::vector<int> idx(take);
        for (int i = 0; i < take; ++i) idx[i] = i;
        while (true) {
          std::vector<int> pick;
          for (int i : idx) pick.push_back(alive[i]);
          ZPoly cand = detail::product_mod_symmetric(pick, m, lifted);
          if (!cand.empty() && cand.back() == 1 && z_divides_monic(cand, rem)) {
            rem = z_div_exact_monic(rem, cand);
            irreducibles.push_back(cand);
            std::vector<int> keep;
            for (int i = 0; i < (int)alive.size(); ++i)
              if (std::find(idx.begin(), idx.end(), i) == idx.end()) keep.push_back(alive[i]);
            alive = std::move(keep);
            found = true;
            break;
          }
          int pos = take - 1;
          while (pos >= 0 && idx[pos] == (int)alive.size() - take + pos) --pos;
          if (pos < 0) break;
          ++idx[pos];
          for (int i = pos + 1; i < take; ++i) idx[i] = idx[i - 1] + 1;
        }
      }
      if (!found) {
        // remaining lifted factors multiply to one irreducible over Z
        std::vector<int> pick(alive.begin(), alive.end());
        ZPoly cand = detail::product_mod_symmetric(pick, m, lifted);
        assert(z_divides_monic(cand, rem));
        rem = z_div_exact_monic(rem, cand);
        irreducibles.push_back(cand);
        alive.clear();
      }
    }
    assert(z_deg(rem) == 0);
    // multiplicities against the original polynomial
    ZPoly full = f_in;
    for (const auto& q : irreducibles) {
      int mult = 0;
      while (z_divides_monic(q, full)) {
        full = z_div_exact_monic(full, q);
        ++mult;
      }
      assert(mult >= 1);
      out.push_back({q, mult});
    }
    assert(z_deg(full) == 0);
    std::sort(out.begin(), out.end(), [](const ZFactor& a, const ZFactor& b) {
      if (a.poly.size() != b.poly.size()) return a.poly.size() < b.poly.size();
      for (int i = (int)a.poly.size() - 1; i >= 0; --i)
        if (a.poly[i] != b.poly[i]) return a.poly[i] < b.poly[i];
      return false;
    });
    return out;
  }
  throw std::runtime_error("no squarefree prime found for integer factorization");
}

} // namespace sl4cohom
