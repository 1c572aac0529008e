#pragma once
// The cell system underlying the cohomology computation: faces of the two
// perfect-form cones whose minimal-vector configurations span R^4, classified
// up to SL(4,Z).  Each class carries its stabilizer with the orientation
// character, a reference orientation of the span of its rank-one forms, and
// its spanning facets with transport elements and incidence signs.
//
// A configuration is a finite set of lines {+-v} of primitive integer row
// vectors; its cone is spanned by the rank-one forms v^T v inside the 10-dim
// space of symmetric matrices.  Cone dimensions run from 10 (the two perfect
// cones) down to 4 (minimal spanning configurations).  The group acts on the
// right, v -> v g, hence on forms by A -> g^T A g.

#include "sl4cohom/cones.hpp"
#include "sl4cohom/perfect.hpp"

#include <unordered_map>

namespace sl4cohom {

using Config = std::vector<Vec4>; // sorted line representatives

inline Mat4 config_gram_sum(const Config& s) {
  Mat4 a{};
  for (const auto& v : s)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a[i][j] += v[i] * v[j];
  return a;
}

inline int config_cone_dim(const Config& s) {
  IMat rows;
  for (const auto& v : s) {
    Sym10 q = sym_pack(outer_sym(v));
    rows.push_back(std::vector<i64>(q.begin(), q.end()));
  }
  return imat_rank(rows);
}

inline bool config_spans(const Config& s) {
  IMat rows;
  for (const auto& v : s) rows.push_back({v[0], v[1], v[2], v[3]});
  return imat_rank(rows) == 4;
}

// All g in SL(4,Z) with s1 * g = s2 as line sets (empty if inequivalent).
// adj1/adj2 are the adjugates of the configuration gram sums; the pairing
// v adj(A_S) w^T is preserved by any candidate map, which prunes the search.
inline std::vector<Mat4> config_isometries(const Config& s1, const Mat4& adj1,
                                           const Config& s2, const Mat4& adj2,
                                           bool first_only) {
  std::vector<Mat4> result;
  if (s1.size() != s2.size()) return result;
  const int n = (int)s1.size();
  // pairing tables
  auto pair_table = [](const Config& s, const Mat4& adj) {
    std::vector<std::vector<i64>> p(s.size(), std::vector<i64>(s.size()));
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = 0; j < s.size(); ++j) {
        i128 acc = 0;
        for (int x = 0; x < 4; ++x)
          for (int y = 0; y < 4; ++y) acc += (i128)s[i][x] * adj[x][y] * s[j][y];
        assert(acc <= INT64_MAX && acc >= INT64_MIN);
        p[i][j] = (i64)acc;
      }
    return p;
  };
  auto p1 = pair_table(s1, adj1), p2 = pair_table(s2, adj2);
  // invariant filter: multisets of sorted absolute row profiles must agree
  {
    auto profile = [](const std::vector<std::vector<i64>>& p) {
      std::vector<std::vector<i64>> rows;
      for (const auto& r : p) {
        std::vector<i64> q;
        for (i64 x : r) q.push_back(std::abs(x));
        std::sort(q.begin(), q.end());
        rows.push_back(std::move(q));
      }
      std::sort(rows.begin(), rows.end());
      return rows;
    };
    if (profile(p1) != profile(p2)) return result;
  }
  // base: 4 independent lines of s1, in order of discovery
  std::vector<int> base;
  {
    IMat rows;
    for (int i = 0; i < n && (int)base.size() < 4; ++i) {
      IMat trial = rows;
      trial.push_back({s1[i][0], s1[i][1], s1[i][2], s1[i][3]});
      if (imat_rank(trial) > imat_rank(rows)) {
        rows = trial;
        base.push_back(i);
      }
    }
  }
  if (base.size() != 4) return result; // does not span: not handled here
  Mat4 bm{};
  for (int i = 0; i < 4; ++i) bm[i] = s1[base[i]];
  i64 bdet = det4(bm);
  Mat4 bm_adj = adjugate4(bm);
  // candidate images: signed lines of s2
  std::array<std::pair<int, int>, 4> img{}; // (index into s2, sign)
  auto rec = [&](auto&& self, int k) -> bool {
    if (k == 4) {
      Mat4 w{};
      for (int i = 0; i < 4; ++i)
        for (int c = 0; c < 4; ++c) w[i][c] = img[i].second * s2[img[i].first][c];
      Mat4 num = mat_mul(bm_adj, w);
      Mat4 g{};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          if (num[i][j] % bdet != 0) return false;
          g[i][j] = num[i][j] / bdet;
        }
      if (det4(g) != 1) return false;
      // full match: s1 * g = s2 as line sets
      for (const auto& v : s1) {
        Vec4 mapped = vec_line_rep(vec_mul(v, g));
        if (!std::binary_search(s2.begin(), s2.end(), mapped)) return false;
      }
      result.push_back(g);
      return first_only;
    }
    for (int cand = 0; cand < n; ++cand) {
      for (int sgn : {1, -1}) {
        bool ok = true;
        for (int j = 0; j <= k && ok; ++j) {
          int cj = (j == k) ? cand : img[j].first;
          int sj = (j == k) ? sgn : img[j].second;
          ok = (p2[cand][cj] * sgn * sj == p1[base[k]][base[j]]);
        }
        if (!ok) continue;
        img[k] = {cand, sgn};
        if (self(self, k + 1)) return true;
      }
    }
    return false;
  };
  rec(rec, 0);
  return result;
}

struct CellFacet {
  int target = -1;  // index of the facet's class
  Mat4 to_rep;      // g with (target config) * g = facet config
  int sign = 0;     // incidence number with transported orientation
};

struct Cell {
  Config lines;
  int cone_dim = 0;            // rank of the spanned space of symmetric forms
  int degree = 0;              // cochain degree: 10 - cone_dim
  Mat4 gram_sum{};             // A_S = sum v^T v
  Mat4 gram_adj{};             // adj(A_S)
  std::vector<int> orient;     // indices into `lines`: ordered basis of the span
  std::vector<Mat4> stab;      // all stabilizing elements of SL(4,Z)
  std::vector<int> stab_chi;   // orientation character of each stabilizer element
  std::vector<CellFacet> facets; // spanning facets only
};

namespace detail {

// rows of rank-one forms in packed coordinates
inline IMat packed_rows(const Config& s) {
  IMat rows;
  for (const auto& v : s) {
    Sym10 q = sym_pack(outer_sym(v));
    rows.push_back(std::vector<i64>(q.begin(), q.end()));
  }
  return rows;
}

// sign of det of the coordinate matrix of `rows` in the basis `basis`
// (both m x 10 with identical rational row span): equals
// sign det(rows * basis^T) since det(basis * basis^T) > 0.
inline int orientation_sign(const IMat& basis, const IMat& rows) {
  int m = (int)basis.size();
  assert((int)rows.size() == m);
  std::vector<std::vector<i128>> mm(m, std::vector<i128>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      i128 s = 0;
      for (int k = 0; k < 10; ++k) s += (i128)rows[i][k] * basis[j][k];
      mm[i][j] = s;
    }
  return sign_det(std::move(mm));
}

} // namespace detail

// orientation character of g on the span of the cell's rank-one forms
inline int cell_chi(const Cell& c, const Mat4& g) {
  IMat basis, rows;
  for (int idx : c.orient) {
    Sym10 q = sym_pack(outer_sym(c.lines[idx]));
    basis.push_back(std::vector<i64>(q.begin(), q.end()));
    Sym10 qg = sym_pack(outer_sym(vec_mul(c.lines[idx], g)));
    rows.push_back(std::vector<i64>(qg.begin(), qg.end()));
  }
  int s = detail::orientation_sign(basis, rows);
  assert(s == 1 || s == -1);
  return s;
}

struct CellSystem {
  std::vector<Cell> cells;                      // cone dims 10 down to 4
  std::array<std::vector<int>, 11> by_cone_dim; // cone_dim -> cell indices
};

inline CellSystem build_cell_system() {
  CellSystem sys;
  auto add_cell = [&](Config s) -> int {
    Cell c;
    c.lines = std::move(s);
    std::sort(c.lines.begin(), c.lines.end());
    c.cone_dim = config_cone_dim(c.lines);
    c.degree = 10 - c.cone_dim;
    c.gram_sum = config_gram_sum(c.lines);
    c.gram_adj = adjugate4(c.gram_sum);
    // orientation: packed-row pivot subset in sorted line order
    IMat rows = detail::packed_rows(c.lines), picked;
    for (int i = 0; i < (int)c.lines.size() && (int)c.orient.size() < c.cone_dim; ++i) {
      IMat trial = picked;
      trial.push_back(rows[i]);
      if (imat_rank(trial) > imat_rank(picked)) {
        picked = trial;
        c.orient.push_back(i);
      }
    }
    assert((int)c.orient.size() == c.cone_dim);
    sys.cells.push_back(std::move(c));
    int idx = (int)sys.cells.size() - 1;
    sys.by_cone_dim[sys.cells[idx].cone_dim].push_back(idx);
    return idx;
  };

  // seed: the two perfect cones
  for (const Mat4& g : {gram_d4(), gram_a4()}) {
    MinVectors mv = minimal_vectors(g);
    add_cell(mv.vecs);
  }

  // walk down: facets of every class at cone dim m give the classes at m-1
  for (int m = 10; m >= 5; --m) {
    for (int ci : sys.by_cone_dim[m]) {
      IMat weighted;
      {
        const Config& s = sys.cells[ci].lines;
        for (const auto& v : s) {
          Sym10 q = sym_pack(outer_sym(v));
          std::vector<i64> row(10);
          for (int k = 0; k < 10; ++k) row[k] = kSymWeight[k] * q[k];
          weighted.push_back(std::move(row));
        }
      }
      for (const auto& fc : cone_facets(weighted)) {
        Config sub;
        for (int gi : fc.gens) sub.push_back(sys.cells[ci].lines[gi]);
        if (!config_spans(sub)) continue; // face at infinity: not a cell
        Mat4 adj_sub = adjugate4(config_gram_sum(sub));
        int target = -1;
        Mat4 to_rep{};
        for (int cj : sys.by_cone_dim[m - 1]) {
          auto iso = config_isometries(sys.cells[cj].lines, sys.cells[cj].gram_adj,
                                       sub, adj_sub, true);
          if (!iso.empty()) {
            target = cj;
            to_rep = iso[0];
            break;
          }
        }
        if (target < 0) {
          target = add_cell(sub);
          to_rep = mat_identity(); // rep == facet configuration (sorted)
          // identity maps rep lines onto sub's sorted lines
        }
        sys.cells[ci].facets.push_back({target, to_rep, 0}); // sign later
      }
    }
  }

  // stabilizers and orientation characters
  for (auto& c : sys.cells) {
    c.stab = config_isometries(c.lines, c.gram_adj, c.lines, c.gram_adj, false);
    assert(!c.stab.empty());
    for (const auto& g : c.stab) c.stab_chi.push_back(cell_chi(c, g));
  }

  // incidence signs: for a facet F of cell c with representative r and
  // transport g (r.lines * g = F), the sign is the orientation of
  //   [ -q(v0) ; images under g of r's orientation basis ]
  // in c's orientation basis, where v0 is the first line of c not on F.
  for (auto& c : sys.cells) {
    IMat basis;
    for (int idx : c.orient) {
      Sym10 q = sym_pack(outer_sym(c.lines[idx]));
      basis.push_back(std::vector<i64>(q.begin(), q.end()));
    }
    for (auto& f : c.facets) {
      const Cell& r = sys.cells[f.target];
      // facet line set = r.lines * g
      std::vector<Vec4> facet_lines;
      for (const auto& v : r.lines) facet_lines.push_back(vec_line_rep(vec_mul(v, f.to_rep)));
      std::sort(facet_lines.begin(), facet_lines.end());
      // outward direction: -q(v0)
      Vec4 v0{};
      bool found = false;
      for (const auto& v : c.lines)
        if (!std::binary_search(facet_lines.begin(), facet_lines.end(), v)) {
          v0 = v;
          found = true;
          break;
        }
      assert(found);
      IMat rows;
      {
        Sym10 q = sym_pack(outer_sym(v0));
        std::vector<i64> neg(10);
        for (int k = 0; k < 10; ++k) neg[k] = -q[k];
        rows.push_back(std::move(neg));
      }
      for (int idx : r.orient) {
        Sym10 q = sym_pack(outer_sym(vec_mul(r.lines[idx], f.to_rep)));
        rows.push_back(std::vector<i64>(q.begin(), q.end()));
      }
      f.sign = detail::orientation_sign(basis, rows);
      assert(f.sign == 1 || f.sign == -1);
    }
  }
  return sys;
}

} // namespace sl4cohom
