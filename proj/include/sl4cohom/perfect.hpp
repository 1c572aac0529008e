#pragma once
// Perfect quaternary quadratic forms via the classical neighbor walk: starting
// from a known perfect form, cross every facet of its minimal-vector cone to
// the contiguous perfect form, and dedupe up to GL(4,Z)-equivalence.  In rank
// 4 this closes with exactly two classes (the root forms of type D4 and A4).

#include "sl4cohom/cones.hpp"
#include "sl4cohom/quadform.hpp"

#include <optional>

namespace sl4cohom {

inline Mat4 gram_d4() {
  return {{{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}}};
}
inline Mat4 gram_a4() {
  return {{{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}}};
}

struct PerfectForm {
  Mat4 gram;                  // primitive integral, positive definite
  i64 min = 0;                // minimum value
  std::vector<Vec4> min_vecs; // one per {v,-v}, sorted
};

inline PerfectForm make_perfect_form(Mat4 g) {
  i64 c = 0;
  for (auto& row : g)
    for (i64 x : row) c = std::gcd(c, std::abs(x));
  if (c > 1)
    for (auto& row : g)
      for (auto& x : row) x /= c;
  MinVectors mv = minimal_vectors(g);
  return {g, mv.min, mv.vecs};
}

// Searches for h in GL(4,Z) with b.gram == h * a.gram * h^T (the pullback of
// a under the substitution v -> v h equals b).  Backtracking over minimal
// vector assignments.
inline std::optional<Mat4> form_isometry(const PerfectForm& a, const PerfectForm& b) {
  if (a.min != b.min || a.min_vecs.size() != b.min_vecs.size()) return std::nullopt;
  if (det4(a.gram) != det4(b.gram)) return std::nullopt;
  // choose 4 independent rows of b's minimal vectors
  std::vector<Vec4> base;
  {
    IMat rows;
    for (const auto& u : b.min_vecs) {
      IMat trial = rows;
      trial.push_back({u[0], u[1], u[2], u[3]});
      if (imat_rank(trial) > imat_rank(rows)) {
        rows = trial;
        base.push_back(u);
        if (base.size() == 4) break;
      }
    }
  }
  assert(base.size() == 4); // minimal vectors of a definite form span
  Mat4 bas{};
  for (int i = 0; i < 4; ++i) bas[i] = base[i];
  i64 bdet = det4(bas);
  assert(bdet != 0);
  Mat4 bas_adj = adjugate4(bas);
  // candidate images: +-(minimal vectors of a)
  std::vector<Vec4> cand;
  for (const auto& w : a.min_vecs) {
    cand.push_back(w);
    cand.push_back({-w[0], -w[1], -w[2], -w[3]});
  }
  std::array<Vec4, 4> img{};
  std::optional<Mat4> found;
  auto rec = [&](auto&& self, int k) -> bool {
    if (k == 4) {
      // h = bas^{-1} * img ; integrality via adjugate
      Mat4 im{};
      for (int i = 0; i < 4; ++i) im[i] = img[i];
      Mat4 num = mat_mul(bas_adj, im);
      Mat4 h{};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          if (num[i][j] % bdet != 0) return false;
          h[i][j] = num[i][j] / bdet;
        }
      i64 d = det4(h);
      if (d != 1 && d != -1) return false;
      Mat4 pull = mat_mul(h, mat_mul(a.gram, mat_transpose(h)));
      if (!(pull == b.gram)) return false;
      found = h;
      return true;
    }
    for (const auto& w : cand) {
      bool ok = true;
      for (int j = 0; j <= k && ok; ++j) {
        // need w_k A w_j^T == u_k B u_j^T for the partial assignment
        const Vec4& wj = (j == k) ? w : img[j];
        i128 lhs = 0, rhs = 0;
        for (int x = 0; x < 4; ++x)
          for (int y = 0; y < 4; ++y) {
            lhs += (i128)w[x] * a.gram[x][y] * wj[y];
            rhs += (i128)base[k][x] * b.gram[x][y] * base[j][y];
          }
        ok = (lhs == rhs);
      }
      if (!ok) continue;
      img[k] = w;
      if (self(self, k + 1)) return true;
    }
    return false;
  };
  rec(rec, 0);
  return found;
}

inline bool forms_equivalent(const PerfectForm& a, const PerfectForm& b) {
  return form_isometry(a, b).has_value();
}

// The contiguous perfect form across the facet of a's minimal-vector cone with
// inward normal H (x H x^T = 0 on the facet's minimal vectors, > 0 on the
// rest).  Exact rational line search.
inline PerfectForm neighbor_form(const PerfectForm& a, const Mat4& h) {
  Frac s = fmake(1, 1);
  for (int iter = 0; iter < 500; ++iter) {
    assert(s.n > 0 && s.n <= INT64_MAX && s.d <= INT64_MAX);
    i64 num = (i64)s.n, den = (i64)s.d;
    Mat4 f{};
    bool fits = true;
    for (int i = 0; i < 4 && fits; ++i)
      for (int j = 0; j < 4; ++j) {
        i128 v = (i128)den * a.gram[i][j] + (i128)num * h[i][j];
        if (v > INT64_MAX || v < INT64_MIN) { fits = false; break; }
        f[i][j] = (i64)v;
      }
    if (!fits || !is_positive_definite(f)) {
      s = fmake(s.n, s.d * 2);
      continue;
    }
    i64 bound = den * a.min; // value m of the original minimum, scaled
    auto sv = short_vectors(f, bound);
    Frac best{0, 1};
    bool below = false;
    for (const auto& [w, val] : sv) {
      if (val >= bound) continue;
      i64 wa = qeval(a.gram, w), wh = qeval(h, w);
      assert(wa > a.min && wh < 0); // dipped strictly below the old minimum
      Frac rho = fmake(wa - a.min, -wh);
      if (!below || fle(rho, best)) best = rho;
      below = true;
    }
    if (below) {
      s = best;
      continue;
    }
    bool new_at_min = false;
    for (const auto& [w, val] : sv)
      if (qeval(h, w) < 0) { new_at_min = true; break; }
    if (new_at_min) return make_perfect_form(f);
    s = fmake(2 * s.n, s.d); // still inside the cone: move further out
  }
  assert(false && "neighbor walk did not converge");
  return {};
}

// Facet data of the minimal-vector cone of a perfect form: the cone in the
// 10-dim space of symmetric forms spanned by the rank-one forms v^T v.
struct PerfectConeFacet {
  std::vector<int> vec_indices; // minimal vectors on the facet
  Mat4 normal;                  // inward: 0 on facet vectors, > 0 on the rest
};

inline std::vector<PerfectConeFacet> perfect_cone_facets(const PerfectForm& a) {
  IMat rows;
  for (const auto& v : a.min_vecs) {
    Sym10 q = sym_pack(outer_sym(v));
    std::vector<i64> row(10);
    for (int k = 0; k < 10; ++k) row[k] = kSymWeight[k] * q[k]; // weighted coords
    rows.push_back(std::move(row));
  }
  assert(imat_rank(rows) == 10); // perfection
  std::vector<PerfectConeFacet> out;
  for (const auto& fc : cone_facets(rows)) {
    Sym10 hs{};
    for (int k = 0; k < 10; ++k) hs[k] = fc.normal[k];
    Mat4 hm = sym_unpack(hs);
    for (int i = 0; i < (int)a.min_vecs.size(); ++i) {
      i64 val = qeval(hm, a.min_vecs[i]);
      bool on = std::find(fc.gens.begin(), fc.gens.end(), i) != fc.gens.end();
      assert(on ? val == 0 : val > 0);
    }
    out.push_back({fc.gens, hm});
  }
  return out;
}

// Neighbor walk over all perfect forms up to equivalence.
inline std::vector<PerfectForm> enumerate_perfect_forms() {
  std::vector<PerfectForm> classes{make_perfect_form(gram_d4())};
  for (size_t i = 0; i < classes.size(); ++i) {
    PerfectForm cur = classes[i]; // copy: classes may reallocate
    for (const auto& fc : perfect_cone_facets(cur)) {
      PerfectForm nb = neighbor_form(cur, fc.normal);
      bool known = false;
      for (const auto& c : classes)
        if (forms_equivalent(c, nb)) { known = true; break; }
      if (!known) classes.push_back(nb);
    }
  }
  return classes;
}

} // namespace sl4cohom
