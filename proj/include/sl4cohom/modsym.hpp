#pragma once
// Classical weight-k modular symbols for Gamma0(N) with N prime and k in
// {2, 4}, over the rationals.  Generators are pairs (monomial X^i Y^(k-2-i),
// point of P^1(Z/N)); the space is the quotient by the standard two-term and
// three-term relations.  Provides the boundary map to the two cusp classes,
// the +1 eigenspace of the star involution, Hecke operators T_ell via
// determinant-ell integer matrices acting on generators, the level involution
// W_N (computed through the continued-fraction rewriting of arbitrary paths),
// and the decomposition of the cuspidal plus-space into Hecke Galois orbits
// with integer characteristic polynomial data.  All levels here are prime, so
// every cusp form is new and orbit data feeds the record files directly.

#include "sl4cohom/forms.hpp"
#include "sl4cohom/qlin.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <vector>

namespace sl4cohom {

class ModularSymbolSpace {
public:
  ModularSymbolSpace(int level, int weight) : N_(level), k_(weight), w_(weight - 2) {
    assert(is_prime_int(N_));
    assert(k_ == 2 || k_ == 4);
    inv_mod_.assign(N_, 0);
    for (int a = 1; a < N_; ++a)
      for (int b = 1; b < N_; ++b)
        if ((a * b) % N_ == 1) {
          inv_mod_[a] = b;
          break;
        }
    ngens_ = (w_ + 1) * (N_ + 1);
    build_quotient();
    build_boundary_and_plus();
  }

  int level() const { return N_; }
  int weight() const { return k_; }
  int quotient_dim() const { return dim_; }
  int cuspidal_plus_dim() const { return (int)plus_basis_.size(); }

  // operator matrices on the cuspidal plus-space, column convention (the
  // image of basis vector j is column j)
  QMat hecke_on_plus(int ell) const { return restrict_rows(plus_basis_, hecke_on_quotient(ell)); }
  QMat fricke_on_plus() const { return restrict_rows(plus_basis_, fricke_on_quotient()); }

  // full quotient-level operators (column convention)
  QMat hecke_on_quotient(int ell) const {
    assert(ell >= 2 && ell % N_ != 0);
    std::vector<std::array<long, 4>> mats = merel_matrices(ell);
    QMat q(dim_, QVec(dim_, 0));
    for (int t = 0; t < dim_; ++t) {
      QVec img(ngens_, 0);
      int i, j;
      decode_gen(free_gen_[t], i, j);
      for (const auto& m : mats) apply_gen(i, j, m[0], m[1], m[2], m[3], 1, img);
      QVec col = to_quotient(img);
      for (int r = 0; r < dim_; ++r) q[r][t] = col[r];
    }
    return q;
  }

  QMat fricke_on_quotient() const {
    QMat q(dim_, QVec(dim_, 0));
    for (int t = 0; t < dim_; ++t) {
      QVec img = fricke_of_gen(free_gen_[t]);
      for (int r = 0; r < dim_; ++r) q[r][t] = img[r];
    }
    return q;
  }

  // star involution on the quotient (column convention)
  QMat star_on_quotient() const {
    QMat q(dim_, QVec(dim_, 0));
    for (int t = 0; t < dim_; ++t) {
      QVec img(ngens_, 0);
      int i, j;
      decode_gen(free_gen_[t], i, j);
      apply_gen(i, j, -1, 0, 0, 1, 1, img);
      QVec col = to_quotient(img);
      for (int r = 0; r < dim_; ++r) q[r][t] = col[r];
    }
    return q;
  }

  // boundary map on the quotient: 2 x dim matrix, row 0 = cusp class of 0,
  // row 1 = cusp class of infinity
  QMat boundary_on_quotient() const { return boundary_; }

  // quotient coordinates of a single generator (for tests)
  QVec gen_coordinates(int i, int j) const { return coord_[gen_index(i, j)]; }

  // decomposition of the cuspidal plus-space into simultaneous Galois orbits
  // of W_N and T_ell (ell over the given primes, those dividing N skipped)
  std::vector<NewformOrbit> newform_orbits(const std::vector<int>& ells) const {
    std::vector<NewformOrbit> out;
    int np = cuspidal_plus_dim();
    if (np == 0) return out;
    QMat w_op = fricke_on_plus();
    std::vector<int> use_ells;
    for (int ell : ells)
      if (ell % N_ != 0) use_ells.push_back(ell);
    std::vector<QMat> t_ops;
    for (int ell : use_ells) t_ops.push_back(hecke_on_plus(ell));

    std::vector<QMat> blocks{q_identity(np)};
    auto refine_by = [&](const QMat& op) {
      std::vector<QMat> next;
      for (const auto& blk : blocks) {
        QMat m = restrict_rows(blk, op);
        ZPoly cp = q_charpoly_z(m);
        auto facs = z_factor_monic(cp);
        if (facs.size() <= 1) {
          next.push_back(blk);
          continue;
        }
        int covered = 0;
        for (const auto& fc : facs) {
          QMat acc = z_poly_at_qmat(fc.poly, m);
          QMat power = acc;
          for (int e = 1; e < fc.mult; ++e) power = q_mul(power, acc);
          QMat ker = q_kernel(power);
          assert((int)ker.size() == fc.mult * z_deg(fc.poly));
          covered += (int)ker.size();
          next.push_back(q_mul(ker, blk));
        }
        assert(covered == (int)blk.size());
      }
      blocks = std::move(next);
    };
    refine_by(w_op);
    for (const auto& op : t_ops) refine_by(op);

    mpz_class scale = 1; // N^((k-2)/2)
    for (int i = 0; i < (k_ - 2) / 2; ++i) scale *= N_;
    for (const auto& blk : blocks) {
      NewformOrbit o;
      o.level = N_;
      o.weight = k_;
      o.dim = (int)blk.size();
      QMat wr = restrict_rows(blk, w_op);
      int w_sign = 0;
      for (int i = 0; i < o.dim; ++i)
        for (int j = 0; j < o.dim; ++j) {
          if (i != j) {
            assert(wr[i][j] == 0 && "level involution must be scalar on an orbit");
            continue;
          }
          mpq_class v = wr[i][i];
          assert(v == mpq_class(scale) || v == mpq_class(-scale));
          int s = v > 0 ? 1 : -1;
          assert(w_sign == 0 || w_sign == s);
          w_sign = s;
        }
      o.eps = (k_ == 2) ? -w_sign : w_sign; // eps = w * (-1)^(k/2)
      for (std::size_t t = 0; t < use_ells.size(); ++t) {
        ZPoly cp = q_charpoly_z(restrict_rows(blk, t_ops[t]));
        o.ap.emplace_back(use_ells[t], std::move(cp));
      }
      out.push_back(std::move(o));
    }
    std::sort(out.begin(), out.end(), [](const NewformOrbit& a, const NewformOrbit& b) {
      if (a.dim != b.dim) return a.dim < b.dim;
      for (std::size_t t = 0; t < std::min(a.ap.size(), b.ap.size()); ++t)
        for (int i = a.dim; i >= 0; --i) {
          const mpz_class& x = a.ap[t].second.size() > (std::size_t)i ? a.ap[t].second[i] : mpz_class(0);
          const mpz_class& y = b.ap[t].second.size() > (std::size_t)i ? b.ap[t].second[i] : mpz_class(0);
          if (x != y) return x < y;
        }
      return false;
    });
    return out;
  }

  // restricted operator (column convention) of op on the span of the given
  // independent rows
  static QMat restrict_rows(const QMat& basis, const QMat& op) {
    if (basis.empty()) return {};
    QMat images = q_mul(basis, q_transpose(op));
    return q_transpose(q_solve_rows(images, basis));
  }

  static QMat z_poly_at_qmat(const ZPoly& f, const QMat& m) {
    int n = (int)m.size();
    QMat acc(n, QVec(n, 0));
    for (int i = (int)f.size() - 1; i >= 0; --i) {
      acc = q_mul(acc, m);
      for (int d = 0; d < n; ++d) acc[d][d] += mpq_class(f[i]);
    }
    return acc;
  }

private:
  int N_, k_, w_, ngens_ = 0, dim_ = 0;
  std::vector<int> inv_mod_;
  QMat coord_;                // ngens x dim: quotient coordinates of each generator
  std::vector<int> free_gen_; // basis slot -> generator index
  QMat relations_;            // saved generator-level relation rows (for tests)
  QMat plus_basis_;           // rows in quotient coordinates
  QMat boundary_;             // 2 x dim

  int gen_index(int i, int j) const { return i * (N_ + 1) + j; }
  void decode_gen(int g, int& i, int& j) const {
    i = g / (N_ + 1);
    j = g % (N_ + 1);
  }

  // index of (u : v) in P^1(Z/N): j in [0, N) is (1 : j), j = N is (0 : 1);
  // returns -1 for (0 : 0)
  int p1_index(long u, long v) const {
    u %= N_;
    if (u < 0) u += N_;
    v %= N_;
    if (v < 0) v += N_;
    if (u != 0) return (int)((v * inv_mod_[u]) % N_);
    return v != 0 ? N_ : -1;
  }

  // P^1 representative of index j
  void p1_rep(int j, long& u, long& v) const {
    if (j < N_) {
      u = 1;
      v = j;
    } else {
      u = 0;
      v = 1;
    }
  }

  // accumulate coeff * (monomial X^i Y^(w-i), point j) . [a b; c d] into a
  // generator-level vector; the point moves by right multiplication of the
  // row vector (u, v), the monomial by substituting (aX+bY, cX+dY)
  void apply_gen(int i, int j, long a, long b, long c, long d, const mpq_class& coeff,
                 QVec& acc) const {
    long u, v;
    p1_rep(j, u, v);
    int jj = p1_index(u * a + v * c, u * b + v * d);
    if (jj < 0) return; // point degenerates (only possible when N | det)
    // (aX+bY)^i (cX+dY)^(w-i) expanded over monomials X^s Y^(w-s)
    std::vector<long> first(i + 1, 0), second(w_ - i + 1, 0);
    for (int s = 0; s <= i; ++s) first[s] = binom_(i, s) * pow_(a, s) * pow_(b, i - s);
    for (int t = 0; t <= w_ - i; ++t)
      second[t] = binom_(w_ - i, t) * pow_(c, t) * pow_(d, w_ - i - t);
    for (int s = 0; s <= i; ++s)
      for (int t = 0; t <= w_ - i; ++t) {
        long cf = first[s] * second[t];
        if (cf != 0) acc[gen_index(s + t, jj)] += coeff * (long)cf;
      }
  }

  static long pow_(long x, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  }
  static long binom_(int n, int r) {
    long v = 1;
    for (int i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
    return v;
  }

  void build_quotient() {
    QMat rel;
    for (int g = 0; g < ngens_; ++g) {
      int i, j;
      decode_gen(g, i, j);
      QVec rs(ngens_, 0), rt(ngens_, 0);
      rs[g] += 1;
      apply_gen(i, j, 0, -1, 1, 0, 1, rs); // x + x.sigma
      rt[g] += 1;
      apply_gen(i, j, 0, -1, 1, -1, 1, rt);  // x.tau
      apply_gen(i, j, -1, 1, -1, 0, 1, rt);  // x.tau^2
      rel.push_back(std::move(rs));
      rel.push_back(std::move(rt));
    }
    relations_ = rel;
    std::vector<int> pivots = q_rref(rel);
    std::vector<int> pivot_row_of_col(ngens_, -1);
    for (std::size_t r = 0; r < pivots.size(); ++r) pivot_row_of_col[pivots[r]] = (int)r;
    dim_ = ngens_ - (int)pivots.size();
    free_gen_.clear();
    std::vector<int> slot_of_col(ngens_, -1);
    for (int c = 0; c < ngens_; ++c)
      if (pivot_row_of_col[c] < 0) {
        slot_of_col[c] = (int)free_gen_.size();
        free_gen_.push_back(c);
      }
    coord_.assign(ngens_, QVec(dim_, 0));
    for (int c = 0; c < ngens_; ++c) {
      if (pivot_row_of_col[c] < 0) {
        coord_[c][slot_of_col[c]] = 1;
      } else {
        const QVec& row = rel[pivot_row_of_col[c]];
        for (int f = 0; f < ngens_; ++f)
          if (slot_of_col[f] >= 0 && row[f] != 0) coord_[c][slot_of_col[f]] = -row[f];
      }
    }
  }

  // boundary of one generator into (class of cusp 0, class of cusp infinity)
  void boundary_of_gen(int g, mpq_class out[2]) const {
    int i, j;
    decode_gen(g, i, j);
    long a, b, c, d; // unimodular lift with bottom row (u, v)
    if (j < N_) {
      a = 0;
      b = -1;
      c = 1;
      d = j;
    } else {
      a = 1;
      b = 0;
      c = 0;
      d = 1;
    }
    out[0] = 0;
    out[1] = 0;
    auto cusp_class = [&](long den) { return (den % N_ == 0) ? 1 : 0; };
    if (i == w_) out[cusp_class(c)] += 1;              // value at (a : c)
    if (i == 0) out[cusp_class(d)] -= 1;               // value at (b : d)
  }

  void build_boundary_and_plus() {
    boundary_.assign(2, QVec(dim_, 0));
    for (int t = 0; t < dim_; ++t) {
      mpq_class bc[2];
      boundary_of_gen(free_gen_[t], bc);
      boundary_[0][t] = bc[0];
      boundary_[1][t] = bc[1];
    }
    // kernel of (boundary stacked over star - identity) = cuspidal plus-space
    QMat star = star_on_quotient();
    QMat stack = boundary_;
    for (int i = 0; i < dim_; ++i) {
      QVec row = star[i];
      row[i] -= 1;
      stack.push_back(std::move(row));
    }
    plus_basis_ = q_kernel(stack);
  }

  // generator-level relation rows (kept for consistency tests)
public:
  const QMat& relation_rows() const { return relations_; }
  QVec to_quotient(const QVec& gen_vec) const {
    QVec out(dim_, 0);
    for (int g = 0; g < ngens_; ++g) {
      if (gen_vec[g] == 0) continue;
      for (int r = 0; r < dim_; ++r)
        if (coord_[g][r] != 0) out[r] += gen_vec[g] * coord_[g][r];
    }
    return out;
  }

private:
  // quotient coordinates of W_N applied to generator g, via the modular
  // symbol (P.g^-1){g 0, g inf} |-> (P.g^-1 w){w^-1 g 0, w^-1 g inf} and the
  // continued-fraction rewriting of both endpoints
  QVec fricke_of_gen(int g) const {
    int i, j;
    decode_gen(g, i, j);
    long a, b, c, d;
    if (j < N_) {
      a = 0;
      b = -1;
      c = 1;
      d = j;
    } else {
      a = 1;
      b = 0;
      c = 0;
      d = 1;
    }
    // polynomial: P . (g^-1 w) with g^-1 = [d -b; -c a], w = [0 -1; N 0]
    long ma = -b * N_, mb = -d, mc = a * N_, md = c;
    // endpoints: w^-1 (g 0) = w^-1 (b : d) = (d : -N b), likewise for g inf
    QVec acc(ngens_, 0);
    path_from_infinity(i, ma, mb, mc, md, c, -N_ * a, 1, acc);  // + {inf, w^-1 g inf}
    path_from_infinity(i, ma, mb, mc, md, d, -N_ * b, -1, acc); // - {inf, w^-1 g 0}
    return to_quotient(acc);
  }

  // accumulate sign * (X^i Y^(w-i) . m) {inf, num/den} into a generator-level
  // vector, by decomposing the path into unimodular steps along continued
  // fraction convergents
  void path_from_infinity(int i, long ma, long mb, long mc, long md, long num, long den,
                          int sign, QVec& acc) const {
    if (den == 0) return; // path from inf to inf
    if (den < 0) {
      den = -den;
      num = -num;
    }
    std::vector<long> cf;
    long x = num, y = den;
    while (y != 0) {
      long q = x / y;
      if ((x % y != 0) && ((x < 0) != (y < 0))) --q; // floor division
      cf.push_back(q);
      long r = x - q * y;
      x = y;
      y = r;
    }
    long h_prev = 1, k_prev = 0, h_cur = cf[0], k_cur = 1;
    for (std::size_t step = 0; step < cf.size(); ++step) {
      if (step > 0) {
        long h_next = cf[step] * h_cur + h_prev;
        long k_next = cf[step] * k_cur + k_prev;
        h_prev = h_cur;
        k_prev = k_cur;
        h_cur = h_next;
        k_cur = k_next;
      }
      long sgn = (step % 2 == 0) ? -1 : 1; // (-1)^(step-1)
      // unimodular g_step = [sgn*h_cur, h_prev; sgn*k_cur, k_prev]
      long ga = sgn * h_cur, gb = h_prev, gc = sgn * k_cur, gd = k_prev;
      assert(ga * gd - gb * gc == 1);
      // term: [ (P.m).g_step, (gc : gd) ] — combine the matrices first
      long ca = ma * ga + mb * gc, cb = ma * gb + mb * gd;
      long cc = mc * ga + md * gc, cd = mc * gb + md * gd;
      int jj = p1_index(gc, gd);
      assert(jj >= 0);
      // expand (ca X + cb Y)^i (cc X + cd Y)^(w-i) onto monomials at point jj
      for (int s = 0; s <= i; ++s)
        for (int t = 0; t <= w_ - i; ++t) {
          long cf1 = binom_(i, s) * pow_(ca, s) * pow_(cb, i - s);
          long cf2 = binom_(w_ - i, t) * pow_(cc, t) * pow_(cd, w_ - i - t);
          long coeff = cf1 * cf2;
          if (coeff != 0) acc[gen_index(s + t, jj)] += mpq_class(coeff) * sign;
        }
    }
  }

  // determinant-ell integer matrices [a b; c d] with a > b >= 0, d > c >= 0
  static std::vector<std::array<long, 4>> merel_matrices(int ell) {
    std::vector<std::array<long, 4>> out;
    for (long a = 1; a <= ell; ++a)
      for (long b = 0; b < a; ++b)
        for (long c = 0; c * (a - b) < ell; ++c) {
          long num = (long)ell + b * c;
          if (num % a != 0) continue;
          long d = num / a;
          if (d > c) out.push_back({a, b, c, d});
        }
    return out;
  }
};

} // namespace sl4cohom
