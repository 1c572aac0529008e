#pragma once
// Sharbly chains supporting the Hecke action on degree-5 cohomology classes.
// A 1-sharbly is a 5-tuple of primitive vector lines (vectors up to sign);
// permuting the tuple multiplies it by the permutation sign, and a tuple is
// zero when a line repeats or the vectors span less than Q^4.  Chains are
// stored with canonically sorted tuples over F_p.  The same conventions give
// 0-sharblies (4-tuples) for boundaries, and a Gamma_0(N)-canonical key used
// to test that boundaries vanish in the coinvariants.

#include "sl4cohom/coset.hpp"
#include "sl4cohom/smallmat.hpp"

#include <map>
#include <optional>
#include <vector>

namespace sl4cohom {

template <int K>
struct LineTuple {
  std::array<Vec4, K> v; // canonical line reps, sorted ascending
  bool operator<(const LineTuple& o) const { return v < o.v; }
  bool operator==(const LineTuple& o) const { return v == o.v; }
};

using Sharbly1 = LineTuple<5>;
using Sharbly0 = LineTuple<4>;

namespace detail {

// Canonicalize each entry as a line rep and sort; returns the permutation
// sign, or 0 for a degenerate tuple (repeated line or vector span < 4).
template <int K>
inline int line_tuple_normalize(std::array<Vec4, K>& a) {
  for (auto& x : a) x = vec_line_rep(x);
  int sign = 1;
  for (int i = 0; i < K; ++i) { // insertion sort, tracking parity
    for (int j = i; j > 0 && a[j] < a[j - 1]; --j) {
      std::swap(a[j], a[j - 1]);
      sign = -sign;
    }
  }
  for (int i = 0; i + 1 < K; ++i)
    if (a[i] == a[i + 1]) return 0;
  IMat rows;
  for (const auto& x : a) rows.push_back({x[0], x[1], x[2], x[3]});
  if (imat_rank(rows) < 4) return 0;
  return sign;
}

} // namespace detail

template <int K>
using LineChain = std::map<LineTuple<K>, i64>; // nonzero coefficients in [1,p)

using Chain1 = LineChain<5>;
using Chain0 = LineChain<4>;

template <int K>
inline void chain_add(LineChain<K>& ch, std::array<Vec4, K> lines, i64 coef, i64 p) {
  coef %= p;
  if (coef < 0) coef += p;
  if (coef == 0) return;
  int s = detail::line_tuple_normalize<K>(lines);
  if (s == 0) return;
  if (s < 0) coef = p - coef;
  LineTuple<K> key{lines};
  auto [it, fresh] = ch.try_emplace(key, 0);
  it->second = (it->second + coef) % p;
  if (it->second == 0) ch.erase(it);
}

// boundary of a 1-sharbly: alternating sum of the five 4-subtuples in the
// stored order
inline void sharbly_boundary(const Sharbly1& s, i64 coef, Chain0& out, i64 p) {
  for (int omit = 0; omit < 5; ++omit) {
    std::array<Vec4, 4> sub;
    int t = 0;
    for (int i = 0; i < 5; ++i)
      if (i != omit) sub[t++] = s.v[i];
    chain_add<4>(out, sub, (omit % 2 == 0) ? coef : -coef, p);
  }
}

inline Chain1 chain1_scale(const Chain1& ch, i64 c, i64 p) {
  Chain1 out;
  c = mod_pos(c % p, p);
  for (const auto& [s, a] : ch) {
    i64 v = (i64)((__int128)a * c % p);
    if (v) out.emplace(s, v);
  }
  return out;
}

inline void chain1_add_chain(Chain1& dst, const Chain1& src, i64 scale, i64 p) {
  scale = mod_pos(scale % p, p);
  if (scale == 0) return;
  for (const auto& [s, a] : src) {
    i64 v = (i64)((__int128)a * scale % p);
    auto [it, fresh] = dst.try_emplace(s, 0);
    it->second = (it->second + v) % p;
    if (it->second == 0) dst.erase(it);
  }
}

// ---------------------------------------------------------------------------
// Gamma_0(N)-canonical keys.
//
// Two tuples are identified when some gamma in Gamma_0(N) maps one onto the
// other (as lines, in any order).  The key minimizes, over all orderings and
// sign choices of the rows, the pair (column-style Hermite form of the row
// matrix, canonical P^3(Z/N) point of the last row of the accumulated
// unimodular transform).  Both components are invariant under right
// multiplication by gamma.  The transport sign is the permutation parity of
// the minimizer; if two minimizers disagree on it the class is killed by 2
// (it behaves like a dead orbit), reported as sign 0.

template <int K>
struct CosetKey {
  std::array<i64, 4 * K> h{}; // Hermite form, row-major (K rows of 4)
  int point = -1;
  int du = 0; // determinant of the Hermite transform: separates the two
              // GL(4,Z)-halves, since the level group lies in SL(4,Z)
  bool operator<(const CosetKey& o) const {
    if (h != o.h) return h < o.h;
    if (point != o.point) return point < o.point;
    return du < o.du;
  }
  bool operator==(const CosetKey& o) const {
    return h == o.h && point == o.point && du == o.du;
  }
};

template <int K>
inline CosetKey<K> gamma0_key(const std::array<Vec4, K>& lines, const CosetSpace& coset,
                              int* sign_out, Mat4* witness_out = nullptr) {
  CosetKey<K> best;
  bool have = false;
  int best_sign = 0;
  bool dead = false;
  Mat4 best_u{}, witness{};
  std::array<int, K> perm;
  for (int i = 0; i < K; ++i) perm[i] = i;
  do {
    int parity = 1;
    for (int i = 0; i < K; ++i)
      for (int j = i + 1; j < K; ++j)
        if (perm[i] > perm[j]) parity = -parity;
    for (int mask = 0; mask < (1 << K); ++mask) {
      // transposed row matrix (4 x K) for the row-style Hermite routine
      IMat xt(4, std::vector<i64>(K));
      for (int i = 0; i < K; ++i) {
        i64 s = (mask >> i) & 1 ? -1 : 1;
        for (int c = 0; c < 4; ++c) xt[c][i] = s * lines[perm[i]][c];
      }
      IMat u;
      IMat ht = hnf_rows(xt, &u); // ht = u * xt, u unimodular 4x4
      CosetKey<K> cand;
      for (int i = 0; i < K; ++i)
        for (int c = 0; c < 4; ++c) cand.h[4 * i + c] = ht[c][i];
      // X * U^T = H, so the coset point is the class of e4 * U^T = column 3 of u
      std::array<int, 4> row;
      for (int c = 0; c < 4; ++c) row[c] = (int)mod_pos(u[c][3], coset.n());
      cand.point = coset.canon_index(row);
      Mat4 um{};
      for (int i = 0; i < 4; ++i)
        for (int c = 0; c < 4; ++c) um[i][c] = u[i][c];
      cand.du = (int)det4(um);
      if (!have || cand < best) {
        best = cand;
        best_sign = parity;
        have = true;
        dead = false;
        best_u = um;
      } else if (cand == best && parity != best_sign) {
        dead = true;
        // two length-equal factorizations with opposite parity produce an
        // element of the level group permuting the lines oddly:
        // lines * (u2^{-1} u1)^T maps the line set to itself
        if (witness_out)
          witness = mat_transpose(mat_mul(mat_inverse_unimodular(um), best_u));
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (sign_out) *sign_out = dead ? 0 : best_sign;
  if (witness_out) *witness_out = witness;
  return best;
}

// Accumulate a chain into Gamma_0-coinvariants; empty result means zero.
template <int K>
inline std::map<CosetKey<K>, i64> gamma0_coinvariants(const LineChain<K>& ch,
                                                      const CosetSpace& coset, i64 p) {
  std::map<CosetKey<K>, i64> acc;
  for (const auto& [s, a] : ch) {
    int sign = 0;
    CosetKey<K> key = gamma0_key<K>(s.v, coset, &sign);
    if (sign == 0) continue; // class killed by 2-torsion
    i64 v = sign > 0 ? a : p - a;
    auto [it, fresh] = acc.try_emplace(key, 0);
    it->second = (it->second + v) % p;
    if (it->second == 0) acc.erase(it);
  }
  return acc;
}

// Is the boundary of the chain zero in the Gamma_0-coinvariant 0-sharblies?
inline bool chain1_is_cycle(const Chain1& ch, const CosetSpace& coset, i64 p) {
  Chain0 bd;
  for (const auto& [s, a] : ch) sharbly_boundary(s, a, bd, p);
  return gamma0_coinvariants<4>(bd, coset, p).empty();
}

} // namespace sl4cohom
