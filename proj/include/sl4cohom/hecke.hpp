#pragma once
// Hecke operators T(ell, k), k = 1, 2, 3, on the degree-5 cohomology of the
// level subgroup, computed through sharbly chains:
//
//   * double_coset_reps enumerates right-coset representatives for the double
//     coset of diag(1,...,ell,...): one upper-triangular Hermite form per
//     sublattice of Z^4 with quotient (Z/ell)^k;
//   * a basis class of H^5 is lifted to its tautological 1-sharbly cycle,
//     translated by every representative, and reduced back onto the cell
//     complex by repeatedly coning non-reduced tuples over a minimal vector
//     of the perfect form located by the Voronoi walk;
//   * reduced tuples are matched to cell classes by configuration isometry
//     and read off as coordinates in degree 5;
//   * H^5 coordinates of the resulting cycles come from a dual pair of bases:
//     b functionals vanishing on the degree-4 image and b kernel vectors of
//     the degree-5 differential whose pairing matrix is invertible.

#include "sl4cohom/complex.hpp"
#include "sl4cohom/fppoly.hpp"
#include "sl4cohom/sharbly.hpp"
#include "sl4cohom/voronoi_walk.hpp"

#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace sl4cohom {

// ---------------------------------------------------------------------------
// Double coset representatives

struct DoubleCosetData {
  int ell = 0, k = 0;
  Mat4 diag{};             // diag(1,...,1,ell,...,ell) with k entries ell
  std::vector<Mat4> reps;  // one per right coset of the level group
};

// Right cosets h * Gamma_0 in the double coset of diag correspond to the
// column lattices h Z^4 with Z^4 / h Z^4 = (Z/ell)^k: one lower-triangular
// Hermite form each (diagonal ell on a k-subset S, free entry h[i][j] in
// [0, ell) exactly when i > j, i in S, j not in S).  Sharbly lines are row
// vectors acted on from the right, so it is this column-side system that
// makes the translate of a cycle again a cycle modulo the level group.
//
// When a coset space at level N > 1 is supplied, each representative is
// further right-adjusted by an SL(4,Z) factor so its bottom row is congruent
// to (0,0,0,*) mod N.  That congruence is exactly membership in the double
// coset of the level group (the ell-adic type is unchanged), and each
// SL(4,Z)-coset of a given ell-type contains a unique such level coset, so
// the adjusted set is a complete system of representatives.
inline DoubleCosetData double_coset_reps(int ell, int k, const CosetSpace* coset = nullptr) {
  assert(ell >= 2 && k >= 1 && k <= 3);
  DoubleCosetData d;
  d.ell = ell;
  d.k = k;
  d.diag = mat_identity();
  for (int i = 4 - k; i < 4; ++i) d.diag[i][i] = ell;
  for (int mask = 0; mask < 16; ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<std::pair<int, int>> free_pos;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < i; ++j)
        if (((mask >> i) & 1) && !((mask >> j) & 1)) free_pos.push_back({i, j});
    i64 total = 1;
    for (std::size_t t = 0; t < free_pos.size(); ++t) total *= ell;
    for (i64 code = 0; code < total; ++code) {
      Mat4 h{};
      for (int i = 0; i < 4; ++i) h[i][i] = ((mask >> i) & 1) ? ell : 1;
      i64 c = code;
      for (const auto& [i, j] : free_pos) {
        h[i][j] = c % ell;
        c /= ell;
      }
      if (coset && coset->n() > 1) {
        std::array<int, 4> bottom{};
        for (int j = 0; j < 4; ++j) bottom[j] = (int)mod_pos(h[3][j], coset->n());
        Mat4 sigma = mat_inverse_unimodular(coset->lift(coset->canon_index(bottom)));
        h = mat_mul(h, sigma);
      }
      d.reps.push_back(h);
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Comparison of a reduced tuple with the degree-5 cell basis

struct ReducedMatch {
  bool terminal = false; // the degree-5 value of the tuple is determined
  int basis_index = -1;  // -1: zero in degree 5 (low-dimensional cone or dead orbit)
  int sign = 0;
};

// Evaluate a tuple against the degree-5 cell basis.  A tuple whose rank-one
// forms span less than 5 dimensions is zero.  A tuple isometric to a cell
// class is (plus or minus) one basis element: the coefficient combines the
// orientation comparison with the transport character of the cell's coset
// point.  Tuples spanning a 5-dimensional cone that is not a face of any
// perfect cone are not terminal and need further coning.
inline ReducedMatch match_reduced_tuple(const EquivariantComplex& cx, const Sharbly1& s) {
  Config cfg(s.v.begin(), s.v.end());
  IMat rows = detail::packed_rows(cfg);
  if (imat_rank(rows) < 5) return {true, -1, 0};
  Mat4 adj = adjugate4(config_gram_sum(cfg));
  for (std::size_t slot = 0; slot < cx.degree_cells[5].size(); ++slot) {
    int ci = cx.degree_cells[5][slot];
    const Cell& c = cx.sys->cells[ci];
    auto iso = config_isometries(c.lines, c.gram_adj, cfg, adj, true);
    if (iso.empty()) continue;
    const Mat4& g = iso[0];
    Mat4 gi = mat_inverse_unimodular(g);
    std::array<int, 4> pt;
    for (int t = 0; t < 4; ++t) pt[t] = (int)mod_pos(gi[3][t], cx.N);
    int x = cx.coset.canon_index(pt);
    const CellOrbitTable& tab = cx.tables[ci];
    int o = tab.orbit_of[x];
    if (!tab.alive[o]) return {true, -1, 0};
    IMat basis;
    for (int idx : c.orient) {
      Sym10 q = sym_pack(outer_sym(vec_mul(c.lines[idx], g)));
      basis.push_back(std::vector<i64>(q.begin(), q.end()));
    }
    int ori = detail::orientation_sign(basis, rows);
    return {true, (int)cx.offsets[5][slot] + tab.pos[o], ori * tab.sign_of[x]};
  }
  return {false, -1, 0};
}

// ---------------------------------------------------------------------------
// Coning strategy for tuples inside the minimal-vector set of one form
//
// When all five lines of a tuple are minimal vectors of the located perfect
// form, further progress is a finite combinatorial game on 5-subsets of that
// form's minimal lines: coning over another minimal vector w replaces the
// subset by its five children (w plus each 4-subset).  The table below
// classifies every subset (zero / face / interior) and stores, for interior
// subsets, a coning vector under which every branch of the game tree ends at
// faces or rank-deficient subsets in the fewest rounds, when one exists.

struct ConingStrategy {
  struct ClassTable {
    std::vector<Vec4> lines;              // standard minimal lines, sorted
    std::map<std::array<int, 5>, std::pair<int, int>> interior; // subset -> (level, w), w = -1 unwinnable
  };
  std::vector<ClassTable> cls;
};

inline const ConingStrategy& coning_strategy() {
  static const ConingStrategy table = [] {
    ConingStrategy ts;
    CellSystem sys = build_cell_system();
    std::vector<int> deg5;
    for (int ci = 0; ci < (int)sys.cells.size(); ++ci)
      if (sys.cells[ci].degree == 5) deg5.push_back(ci);
    const PerfectGraph& pg = perfect_graph();
    for (const auto& node : pg.nodes) {
      ConingStrategy::ClassTable ct;
      ct.lines = node.form.min_vecs;
      int n = (int)ct.lines.size();
      std::vector<std::array<int, 5>> subs;
      std::array<int, 5> idx{};
      auto gen = [&](auto&& self, int start, int got) -> void {
        if (got == 5) {
          subs.push_back(idx);
          return;
        }
        for (int i = start; i <= n - (5 - got); ++i) {
          idx[got] = i;
          self(self, i + 1, got + 1);
        }
      };
      gen(gen, 0, 0);
      std::map<std::array<int, 5>, int> id;
      for (int i = 0; i < (int)subs.size(); ++i) id[subs[i]] = i;
      std::vector<char> interior(subs.size(), 0);
      for (int i = 0; i < (int)subs.size(); ++i) {
        Config cfg;
        for (int t : subs[i]) cfg.push_back(ct.lines[t]);
        std::sort(cfg.begin(), cfg.end());
        if (imat_rank(detail::packed_rows(cfg)) < 5) continue;
        Mat4 adj = adjugate4(config_gram_sum(cfg));
        bool face = false;
        for (int cj : deg5) {
          if (!config_isometries(sys.cells[cj].lines, sys.cells[cj].gram_adj, cfg, adj, true)
                   .empty()) {
            face = true;
            break;
          }
        }
        interior[i] = !face;
      }
      const int kInf = 1 << 20;
      std::vector<int> level(subs.size());
      std::vector<int> best_w(subs.size(), -1);
      for (int i = 0; i < (int)subs.size(); ++i) level[i] = interior[i] ? kInf : 0;
      bool changed = true;
      while (changed) {
        changed = false;
        for (int i = 0; i < (int)subs.size(); ++i) {
          if (!interior[i]) continue;
          int best = kInf, bw = -1;
          for (int w = 0; w < n; ++w) {
            bool inset = false;
            for (int t : subs[i]) inset |= (t == w);
            if (inset) continue;
            int worst = 0;
            for (int omit = 0; omit < 5; ++omit) {
              std::array<int, 5> ch{};
              int t2 = 0;
              for (int j = 0; j < 5; ++j)
                if (j != omit) ch[t2++] = subs[i][j];
              ch[4] = w;
              std::sort(ch.begin(), ch.end());
              worst = std::max(worst, level[id[ch]]);
            }
            if (worst < best) {
              best = worst;
              bw = w;
            }
          }
          if (best < kInf && level[i] > best + 1) {
            level[i] = best + 1;
            best_w[i] = bw;
            changed = true;
          }
        }
      }
      for (int i = 0; i < (int)subs.size(); ++i)
        if (interior[i])
          ct.interior.emplace(subs[i],
                              std::make_pair(level[i] >= kInf ? -1 : level[i], best_w[i]));
      ts.cls.push_back(std::move(ct));
    }
    return ts;
  }();
  return table;
}

// ---------------------------------------------------------------------------
// Reduction of sharbly chains to degree-5 coordinates

struct ReduceOptions {
  int max_rounds = 200;
  std::size_t max_terms = 5'000'000;
  int salt = 0; // perturbs walk scan order and tie-breaks; results must agree
  std::ostream* trace = nullptr; // optional per-round diagnostics
};

struct ReduceReport {
  bool completed = true;
  int rounds = 0;
  std::size_t peak_terms = 0;
  std::size_t terminal_terms = 0;
  std::size_t interior_states = 0;  // all-minimal tuples that matched no cell
  std::size_t escape_conings = 0;   // interior tuples needing a non-minimal cone
  std::size_t boundary_conings = 0; // cones removing a non-unimodular face
  std::optional<Sharbly1> offending; // a non-reduced tuple left at the cap
};

struct ReductionIncomplete : std::runtime_error {
  Sharbly1 offending;
  ReduceReport report;
  ReductionIncomplete(const std::string& msg, Sharbly1 off, ReduceReport rep)
      : std::runtime_error(msg), offending(off), report(rep) {}
};

namespace detail {

inline i64 tuple_weight(const std::array<Vec4, 5>& a) {
  i64 s = 0;
  for (const auto& v : a)
    for (i64 x : v) s += x * x;
  return s;
}

inline i64 qeval(const Mat4& q, const Vec4& x) {
  i64 s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += q[i][j] * x[i] * x[j];
  return s;
}

// Score a coning candidate by the values of the children's lines against the
// children's own barycenter forms.  These values transform invariantly under
// the level group, so equivalent tuples appearing across the chain make
// equivalent choices and their descendants can cancel.
inline i64 cone_score(const std::array<Vec4, 5>& lines, const Mat4& q_sum, const Vec4& w) {
  Mat4 wq{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) wq[i][j] = w[i] * w[j];
  i64 score = 0;
  for (int omit = 0; omit < 5; ++omit) {
    std::array<Vec4, 5> child;
    child[0] = w;
    int t = 1;
    for (int i = 0; i < 5; ++i)
      if (i != omit) child[t++] = lines[i];
    std::array<Vec4, 5> norm = child;
    if (line_tuple_normalize<5>(norm) == 0) continue; // degenerate: drops out
    Mat4 qc{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        qc[i][j] = q_sum[i][j] - lines[omit][i] * lines[omit][j] + wq[i][j];
    for (const auto& x : child) score += qeval(qc, x);
  }
  return score;
}

// Boundary-face survey.  Every reduced configuration has unimodular or
// degenerate 4-subsets, so a tuple whose boundary contains a face with
// |det| >= 2 can never be read off in place; those faces must be removed
// first, and because the working chain is a cycle modulo the level group,
// such faces occur in cancelling pairs across the chain.
struct FaceData {
  int omit = -1;
  i64 absdet = 0;
  std::array<Vec4, 4> lines{};
};

inline std::array<FaceData, 5> tuple_faces(const std::array<Vec4, 5>& v) {
  std::array<FaceData, 5> fs{};
  for (int j = 0; j < 5; ++j) {
    fs[j].omit = j;
    int t = 0;
    for (int i = 0; i < 5; ++i)
      if (i != j) fs[j].lines[t++] = v[i];
    Mat4 m{fs[j].lines[0], fs[j].lines[1], fs[j].lines[2], fs[j].lines[3]};
    i64 d = det4(m);
    fs[j].absdet = d < 0 ? -d : d;
  }
  return fs;
}

// Pairing values x_i . adj(Q_f) . x_j^T of a face against its own barycenter
// form are invariant under unimodular transport, so scores built from them
// agree at equivalent faces and equivalent tuples make matching choices.
inline std::array<i128, 10> face_pairing_profile(const FaceData& f, Mat4* adj_out) {
  Mat4 q{};
  for (const auto& x : f.lines)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) q[i][j] += x[i] * x[j];
  Mat4 a = adjugate4(q);
  if (adj_out) *adj_out = a;
  std::array<i128, 10> out{};
  int t = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      i128 v = 0;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) v += (i128)f.lines[i][r] * a[r][c] * f.lines[j][c];
      out[t++] = v < 0 ? -v : v;
    }
  std::sort(out.begin(), out.end());
  return out;
}

// Reducing points for a face of determinant D >= 2: the lattice points
// w = (sum_i t_i x_i)/D with t in [0,D)^4.  Replacing x_i by such a w scales
// the face determinant by t_i/D, so every candidate strictly shrinks the
// attacked face, and the candidate set is an invariant of the face.
inline std::vector<Vec4> face_reducing_candidates(const FaceData& f) {
  const i64 D = f.absdet;
  std::vector<Vec4> out;
  std::array<i64, 4> t{};
  while (true) {
    bool zero = (t[0] == 0 && t[1] == 0 && t[2] == 0 && t[3] == 0);
    if (!zero) {
      Vec4 s{};
      for (int i = 0; i < 4; ++i)
        for (int c = 0; c < 4; ++c) s[c] += t[i] * f.lines[i][c];
      bool divis = true;
      for (int c = 0; c < 4; ++c) divis &= (s[c] % D == 0);
      if (divis) {
        for (int c = 0; c < 4; ++c) s[c] /= D;
        out.push_back(vec_line_rep(vec_primitive(s)));
      }
    }
    int pos = 0;
    while (pos < 4 && t[pos] == D - 1) t[pos++] = 0;
    if (pos == 4) break;
    ++t[pos];
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// The reducing point canonically attached to a face.  It depends only on the
// face itself (not on any tuple containing it), so the two sides of a paired
// face across a cycle cone over matching points and their children cancel in
// coinvariants.  Scored by invariant data; the final tie-break is the lex
// order of the coordinate vector, which matched faces share up to automorphism.
inline Vec4 face_canonical_point(const FaceData& f) {
  Mat4 adj{};
  (void)face_pairing_profile(f, &adj);
  using Score = std::tuple<std::array<i64, 4>, i128, std::array<i128, 4>, Vec4>;
  bool have = false;
  Score best{};
  Vec4 best_w{};
  for (const Vec4& cand : face_reducing_candidates(f)) {
    std::array<i64, 4> dets{};
    for (int i = 0; i < 4; ++i) {
      Mat4 m{f.lines[0], f.lines[1], f.lines[2], f.lines[3]};
      m[i] = cand;
      i64 d = det4(m);
      dets[i] = d < 0 ? -d : d;
    }
    std::sort(dets.begin(), dets.end(), std::greater<>());
    i128 self = 0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) self += (i128)cand[r] * adj[r][c] * cand[c];
    if (self < 0) self = -self;
    std::array<i128, 4> cross{};
    for (int i = 0; i < 4; ++i) {
      i128 v = 0;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) v += (i128)f.lines[i][r] * adj[r][c] * cand[c];
      cross[i] = v < 0 ? -v : v;
    }
    std::sort(cross.begin(), cross.end());
    Score sc{dets, self, cross, cand};
    if (!have || sc < best) {
      have = true;
      best = sc;
      best_w = cand;
    }
  }
  assert(have && "a face of determinant >= 2 always has a reducing point");
  return best_w;
}

} // namespace detail

// Working representation of a chain in coinvariants of the level group: one
// canonical key per tuple orbit, a geometric representative for that orbit,
// and the coefficient of the canonically oriented class.  Merging equivalent
// tuples is what lets the paired non-unimodular faces of a cycle cancel.
struct OrbitTerm {
  Sharbly1 rep;
  int rep_sign = 1; // orientation of `rep` relative to the canonical class
  i64 coef = 0;
};
using OrbitChain1 = std::map<CosetKey<5>, OrbitTerm>;

inline void orbit_chain_add(OrbitChain1& oc, const CosetSpace& coset,
                            const std::array<Vec4, 5>& lines, i64 coef, i64 p) {
  std::array<Vec4, 5> a = lines;
  int ns = detail::line_tuple_normalize<5>(a);
  if (ns == 0) return;
  int sgn = 0;
  CosetKey<5> key = gamma0_key<5>(a, coset, &sgn);
  if (sgn == 0) return; // orientation-reversing stabilizer kills the class
  i64 v = mod_pos((i64)((i128)coef * (ns * sgn) % p), p);
  if (v == 0) return;
  auto [it, fresh] = oc.try_emplace(key, OrbitTerm{Sharbly1{a}, sgn, 0});
  it->second.coef = (it->second.coef + v) % p;
  if (it->second.coef == 0) oc.erase(it);
}

// Reduce the chain and accumulate the degree-5 coordinates of its image.
// Each non-reduced tuple u is replaced, modulo boundaries, by the five cones
// [w | u minus one line] over a chosen point w.  While any tuple has a
// non-unimodular boundary face, the worst such faces across the chain are
// attacked in a synchronized wave with face-canonical reducing points; the
// remaining tuples cone over minimal vectors of the perfect form whose cone
// contains their barycenter form.
inline std::vector<i64> reduce_to_coords(const EquivariantComplex& cx, Chain1 ch, i64 p,
                                         const ReduceOptions& opt = {},
                                         ReduceReport* report = nullptr) {
  std::vector<i64> coords(cx.dim[5], 0);
  ReduceReport local;
  ReduceReport& rp = report ? *report : local;
  rp = ReduceReport{};
  const i64 inv2 = mod_inv(2, p);

  OrbitChain1 oc;
  for (const auto& [s, a] : ch) orbit_chain_add(oc, cx.coset, s.v, a, p);
  ch.clear();

  auto worst_face_det = [](const std::array<detail::FaceData, 5>& fs) {
    i64 w = 0;
    for (const auto& f : fs) w = std::max(w, f.absdet);
    return w;
  };

  for (int round = 0;; ++round) {
    rp.rounds = round;
    rp.peak_terms = std::max(rp.peak_terms, oc.size());
    if (oc.empty()) break;
    if (round >= opt.max_rounds) {
      rp.completed = false;
      rp.offending = oc.begin()->second.rep;
      for (const auto& [key, term] : oc) { // report a tuple that is actually stuck
        const Sharbly1& s = term.rep;
        if (worst_face_det(detail::tuple_faces(s.v)) >= 2) {
          rp.offending = s;
          break;
        }
        Mat4 q = config_gram_sum(Config(s.v.begin(), s.v.end()));
        LocateResult loc = voronoi_locate(q, opt.salt);
        if (loc.pairing != 2 * 5 || !match_reduced_tuple(cx, s).terminal) {
          rp.offending = s;
          break;
        }
      }
      break;
    }

    // Wave gate: while any tuple has a boundary face of determinant >= 2,
    // process exactly the tuples whose worst face attains the chain-wide
    // maximum, so paired faces are attacked in the same round and their
    // matching children cancel on insertion.
    i64 global_max = 0;
    for (const auto& [key, term] : oc)
      global_max = std::max(global_max, worst_face_det(detail::tuple_faces(term.rep.v)));

    if (opt.trace)
      *opt.trace << "== round " << round << ": " << oc.size() << " orbit terms, max face det "
                 << global_max << "\n";

    OrbitChain1 next;
    auto pass_through = [&](const CosetKey<5>& key, const OrbitTerm& term) {
      auto [it, fresh] = next.try_emplace(key, term);
      if (!fresh) {
        it->second.coef = (it->second.coef + term.coef) % p;
        if (it->second.coef == 0) next.erase(it);
      }
    };

    for (const auto& [key, term] : oc) {
      const Sharbly1& s = term.rep;
      const i64 a_eff = term.rep_sign > 0 ? term.coef : p - term.coef;
      Vec4 w{};
      bool have_w = false;
      const char* mode = "?";
      auto emit_trace = [&](const char* action, bool with_w) {
        if (!opt.trace) return;
        *opt.trace << "  " << action << " c=" << a_eff << " :";
        for (const auto& v : s.v)
          *opt.trace << " (" << v[0] << "," << v[1] << "," << v[2] << "," << v[3] << ")";
        if (with_w) *opt.trace << "  w=(" << w[0] << "," << w[1] << "," << w[2] << "," << w[3] << ")";
        *opt.trace << "\n";
      };

      // Degenerate support reads as zero regardless of the boundary survey;
      // this is also how pieces carrying a face with no live partner die.
      if (imat_rank(detail::packed_rows(Config(s.v.begin(), s.v.end()))) < 5) {
        ++rp.terminal_terms;
        emit_trace("drop", false);
        continue;
      }

      if (global_max >= 2) {
        auto faces = detail::tuple_faces(s.v);
        if (worst_face_det(faces) < global_max) {
          emit_trace("pass", false);
          pass_through(key, term);
          continue;
        }
        // Telescoped attack: repeatedly cone over the canonical reducing
        // point of a worst face until every worst face of every piece
        // carries its own point; those pieces are emitted and cancel against
        // their partners across the chain.
        std::vector<std::pair<std::array<Vec4, 5>, i64>> stack;
        stack.push_back({s.v, a_eff});
        std::size_t budget = 4096;
        while (!stack.empty()) {
          auto [tu, ta] = stack.back();
          stack.pop_back();
          auto tf = detail::tuple_faces(tu);
          int target = -1;
          std::array<i128, 10> target_prof{};
          Vec4 tw{};
          for (int j = 0; j < 5; ++j) {
            if (tf[j].absdet != global_max) continue;
            Vec4 wj = detail::face_canonical_point(tf[j]);
            bool present = false;
            for (const auto& v : tu) present |= (v == wj);
            if (present) continue; // already coned: waits for its partner
            auto prof = detail::face_pairing_profile(tf[j], nullptr);
            if (target < 0 || prof < target_prof) {
              target = j;
              target_prof = prof;
              tw = wj;
            }
          }
          if (target < 0 || budget == 0) {
            if (opt.trace) {
              *opt.trace << "  emit c=" << ta << " :";
              for (const auto& v : tu)
                *opt.trace << " (" << v[0] << "," << v[1] << "," << v[2] << "," << v[3] << ")";
              *opt.trace << "\n";
            }
            orbit_chain_add(next, cx.coset, tu, ta, p);
            continue;
          }
          --budget;
          ++rp.boundary_conings;
          // A dead target face has no partner in the rest of the cycle: its
          // class is already zero in the coinvariants.  Split the carrier into
          // half itself plus half its translate under the odd stabilizer of
          // the face; both are coned over the same point, and the two children
          // carrying the face are equal with opposite coefficients.
          std::vector<std::pair<std::array<Vec4, 5>, i64>> pieces;
          {
            int fsgn = 0;
            Mat4 gm{};
            gamma0_key<4>(tf[target].lines, cx.coset, &fsgn, &gm);
            if (fsgn == 0) {
              i64 half = (i64)((i128)ta * inv2 % p);
              std::array<Vec4, 5> tg;
              for (int i = 0; i < 5; ++i) tg[i] = vec_mul(tu[i], gm);
              int ns2 = detail::line_tuple_normalize<5>(tg);
              assert(ns2 != 0);
              pieces.push_back({tu, half});
              pieces.push_back({tg, ns2 > 0 ? half : p - half});
            } else {
              pieces.push_back({tu, ta});
            }
          }
          for (const auto& [ptu, pta] : pieces) {
            bool w_present = false;
            for (const auto& v : ptu) w_present |= (v == tw);
            if (w_present) {
              // the translate already carries the coning point: leave it for
              // re-selection; its face child cancels against the other half
              stack.push_back({ptu, pta});
              continue;
            }
            if (opt.trace) {
              *opt.trace << "  facecone c=" << pta << " :";
              for (const auto& v : ptu)
                *opt.trace << " (" << v[0] << "," << v[1] << "," << v[2] << "," << v[3] << ")";
              *opt.trace << "  w=(" << tw[0] << "," << tw[1] << "," << tw[2] << "," << tw[3]
                         << ")\n";
            }
            for (int omit = 0; omit < 5; ++omit) {
              std::array<Vec4, 5> child;
              child[0] = tw;
              int t = 1;
              for (int i = 0; i < 5; ++i)
                if (i != omit) child[t++] = ptu[i];
              int ns = detail::line_tuple_normalize<5>(child);
              if (ns == 0) continue;
              i64 ca = (omit % 2 == 0) ? pta : p - pta;
              if (ns < 0) ca = p - ca;
              ca = mod_pos(ca, p);
              if (ca != 0) stack.push_back({child, ca});
            }
          }
          if (stack.size() + next.size() > opt.max_terms) {
            rp.completed = false;
            rp.offending = Sharbly1{tu};
            break;
          }
        }
        if (!rp.completed) break;
        continue;
      } else {
        Mat4 q = config_gram_sum(Config(s.v.begin(), s.v.end()));
        LocateResult loc = voronoi_locate(q, opt.salt);
        std::vector<Vec4> cands;
        if (loc.pairing == 2 * 5) { // every line is a minimal vector
          ReducedMatch m = match_reduced_tuple(cx, s);
          if (m.terminal) {
            ++rp.terminal_terms;
            emit_trace(m.basis_index >= 0 ? "read" : "drop", false);
            if (m.basis_index >= 0)
              coords[m.basis_index] = mod_pos(coords[m.basis_index] + m.sign * a_eff, p);
            continue;
          }
          // interior subset of the located form's minimal lines: play the
          // precomputed game when winnable
          ++rp.interior_states;
          const auto& ct = coning_strategy().cls[loc.cls];
          Mat4 minv = mat_inverse_unimodular(loc.mi);
          std::array<int, 5> state{};
          for (int i = 0; i < 5; ++i) {
            Vec4 std_line = vec_line_rep(vec_mul(s.v[i], loc.mi));
            auto it = std::lower_bound(ct.lines.begin(), ct.lines.end(), std_line);
            assert(it != ct.lines.end() && *it == std_line);
            state[i] = (int)(it - ct.lines.begin());
          }
          std::sort(state.begin(), state.end());
          assert(ct.interior.count(state));
          const int kInf = 1 << 20;
          auto state_level = [&](std::array<int, 5> st) -> int {
            std::sort(st.begin(), st.end());
            auto it = ct.interior.find(st);
            if (it == ct.interior.end()) return 0; // face or rank-deficient
            return it->second.first < 0 ? kInf : it->second.first;
          };
          int best = kInf;
          std::vector<int> opt_ws;
          for (int cw = 0; cw < (int)ct.lines.size(); ++cw) {
            bool inset = false;
            for (int t : state) inset |= (t == cw);
            if (inset) continue;
            int worst = 0;
            for (int omit = 0; omit < 5; ++omit) {
              std::array<int, 5> chs{};
              int t2 = 0;
              for (int j = 0; j < 5; ++j)
                if (j != omit) chs[t2++] = state[j];
              chs[4] = cw;
              worst = std::max(worst, state_level(chs));
            }
            if (worst < best) {
              best = worst;
              opt_ws.assign(1, cw);
            } else if (worst == best) {
              opt_ws.push_back(cw);
            }
          }
          if (best < kInf) {
            // candidates: the level-optimal game moves, back in working coordinates
            mode = "game";
            for (int cw : opt_ws) cands.push_back(vec_line_rep(vec_mul(ct.lines[cw], minv)));
          } else {
            // unwinnable within the minimal lines: cone over a short pairwise
            // combination, leaving the all-minimal regime
            ++rp.escape_conings;
            mode = "escape";
            for (int i = 0; i < 5; ++i)
              for (int j = i + 1; j < 5; ++j)
                for (int sg : {1, -1}) {
                  Vec4 cand{};
                  for (int t = 0; t < 4; ++t) cand[t] = s.v[i][t] + sg * s.v[j][t];
                  bool zero = (cand[0] == 0 && cand[1] == 0 && cand[2] == 0 && cand[3] == 0);
                  if (!zero) cands.push_back(vec_line_rep(vec_primitive(cand)));
                }
          }
        } else {
          mode = "free";
          cands = located_min_vectors(loc);
        }
        std::vector<std::pair<i64, Vec4>> scored;
        for (const Vec4& cand : cands) {
          bool present = false;
          for (const auto& v : s.v) present |= (v == cand);
          if (present) continue;
          scored.push_back({detail::cone_score(s.v, q, cand), cand});
        }
        assert(!scored.empty());
        std::sort(scored.begin(), scored.end());
        std::size_t tied = 1;
        while (tied < scored.size() && scored[tied].first == scored[0].first) ++tied;
        w = scored[opt.salt % tied].second;
        have_w = true;
      }

      assert(have_w);
      emit_trace(mode, true);
      for (int omit = 0; omit < 5; ++omit) {
        std::array<Vec4, 5> child;
        child[0] = w;
        int t = 1;
        for (int i = 0; i < 5; ++i)
          if (i != omit) child[t++] = s.v[i];
        orbit_chain_add(next, cx.coset, child, (omit % 2 == 0) ? a_eff : p - a_eff, p);
      }
      if (next.size() > opt.max_terms) {
        rp.completed = false;
        rp.offending = s;
        next.clear();
        break;
      }
    }
    if (!rp.completed) break;
    oc = std::move(next);
  }
  if (!rp.completed) {
    std::ostringstream os;
    os << "sharbly reduction hit its cap after " << rp.rounds << " rounds ("
       << rp.peak_terms << " peak terms); offending tuple:";
    for (const auto& v : rp.offending->v)
      os << " (" << v[0] << "," << v[1] << "," << v[2] << "," << v[3] << ")";
    throw ReductionIncomplete(os.str(), *rp.offending, rp);
  }
  return coords;
}

// ---------------------------------------------------------------------------
// Hecke translation of chains

// ell must be invertible at the level; the translate of a cycle is a cycle.
inline Chain1 hecke_image(const Chain1& ch, const DoubleCosetData& dc, const CosetSpace& coset,
                          i64 p, bool check_cycle = true) {
  if (coset.n() % dc.ell == 0)
    throw std::invalid_argument("T(ell,k) needs ell coprime to the level");
  Chain1 out;
  for (const Mat4& h : dc.reps) {
    for (const auto& [s, a] : ch) {
      std::array<Vec4, 5> mapped;
      for (int i = 0; i < 5; ++i) mapped[i] = vec_primitive(vec_mul(s.v[i], h));
      chain_add<5>(out, mapped, a, p);
    }
  }
  if (check_cycle) {
    assert(chain1_is_cycle(ch, coset, p));
    assert(chain1_is_cycle(out, coset, p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// H^5 coordinates: dual functionals and cycle representatives

namespace detail {

struct BuiltEchelon {
  FpEchelon ech;
  std::vector<int> piv_row_of; // relabeled column -> echelon row, -1 if free

  BuiltEchelon(i64 p, int ncols) : ech(p, ncols), piv_row_of(ncols, -1) {}

  void finish() {
    const auto& rows = ech.rows();
    for (int i = 0; i < (int)rows.size(); ++i) piv_row_of[rows[i].front().first] = i;
  }
};

// Echelonize with the fill-reducing heuristics (rare columns first via the
// shared relabeling; shortest rows consumed first).
inline BuiltEchelon build_fill_echelon(std::vector<SparseRow> rows, int ncols, i64 p,
                                       const std::vector<int>& new_of) {
  for (auto& r : rows) {
    for (auto& [c, v] : r) c = new_of[c];
    std::sort(r.begin(), r.end());
  }
  using Item = std::pair<std::size_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int i = 0; i < (int)rows.size(); ++i)
    if (!rows[i].empty()) pq.push({rows[i].size(), i});
  BuiltEchelon be(p, ncols);
  while (!pq.empty()) {
    auto [len, idx] = pq.top();
    pq.pop();
    SparseRow r = be.ech.reduce(std::move(rows[idx]));
    if (r.empty()) {
      rows[idx].clear();
      continue;
    }
    if (pq.empty() || r.size() <= pq.top().first) {
      be.ech.insert(std::move(r));
      rows[idx].clear();
    } else {
      std::size_t nl = r.size();
      rows[idx] = std::move(r);
      pq.push({nl, idx});
    }
  }
  be.finish();
  return be;
}

// Kernel vector of the echelonized row system for one free column:
// x[free] = 1, pivot entries by back-substitution.  Relabeled coordinates.
inline SparseRow echelon_kernel_vector(const BuiltEchelon& be, int free_col, i64 p) {
  const auto& rows = be.ech.rows();
  std::vector<std::pair<int, i64>> x{{free_col, 1}};
  std::unordered_map<int, i64> xv;
  xv[free_col] = 1;
  std::vector<int> piv_desc;
  for (const auto& r : rows)
    if (r.front().first < free_col) piv_desc.push_back(r.front().first);
  std::sort(piv_desc.rbegin(), piv_desc.rend());
  for (int c : piv_desc) {
    const SparseRow& row = rows[be.piv_row_of[c]];
    i64 s = 0;
    for (const auto& [col, val] : row) {
      if (col == c) continue;
      auto it = xv.find(col);
      if (it != xv.end()) s = (s + val * it->second) % p;
    }
    if (s) xv[c] = p - s;
  }
  SparseRow out;
  for (const auto& [c, v] : xv) out.push_back({c, v});
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::vector<i64>> fp_dense_inverse(std::vector<std::vector<i64>> a, i64 p) {
  int n = (int)a.size();
  std::vector<std::vector<i64>> inv(n, std::vector<i64>(n, 0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col]) {
        piv = r;
        break;
      }
    assert(piv >= 0 && "pairing matrix must be invertible");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    i64 ic = mod_inv(a[col][col], p);
    for (int j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * ic % p;
      inv[col][j] = inv[col][j] * ic % p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || !a[r][col]) continue;
      i64 f = a[r][col];
      for (int j = 0; j < n; ++j) {
        a[r][j] = mod_pos(a[r][j] - f * a[col][j], p);
        inv[r][j] = mod_pos(inv[r][j] - f * inv[col][j], p);
      }
    }
  }
  return inv;
}

} // namespace detail

struct H5Space {
  i64 p = 0;
  int n5 = 0, b = 0, r4 = 0, r5 = 0;
  std::vector<std::vector<i64>> f;    // b functionals vanishing on im d^4
  std::vector<std::vector<i64>> z;    // b cycle representatives in ker d^5
  std::vector<std::vector<i64>> ginv; // inverse of the pairing (f_i . z_j)

  // H^5 coordinates (in the basis of the z classes) of a degree-5 cycle
  std::vector<i64> class_coords(const std::vector<i64>& v) const {
    assert((int)v.size() == n5);
    std::vector<i64> y(b, 0);
    for (int i = 0; i < b; ++i) {
      i64 s = 0;
      for (int j = 0; j < n5; ++j)
        if (v[j]) s = (s + (__int128)f[i][j] * v[j]) % p;
      y[i] = s;
    }
    std::vector<i64> out(b, 0);
    for (int i = 0; i < b; ++i) {
      i64 s = 0;
      for (int j = 0; j < b; ++j) s = (s + (__int128)ginv[i][j] * y[j]) % p;
      out[i] = s;
    }
    return out;
  }
};

inline H5Space h5_space(const EquivariantComplex& cx, i64 p) {
  H5Space sp;
  sp.p = p;
  sp.n5 = cx.dim[5];
  std::vector<SparseRow> rows5 = cx.d[5].to_rows(); // equations cutting ker d^5
  std::vector<SparseRow> rows4 = cx.d[4].to_cols(); // spanning im d^4
  // shared fill-reducing column order over F^{C^5}
  std::vector<int> count(sp.n5, 0);
  for (const auto& r : rows5)
    for (const auto& [c, v] : r) count[c]++;
  for (const auto& r : rows4)
    for (const auto& [c, v] : r) count[c]++;
  std::vector<int> old_of(sp.n5), new_of(sp.n5);
  for (int c = 0; c < sp.n5; ++c) old_of[c] = c;
  std::stable_sort(old_of.begin(), old_of.end(),
                   [&](int a, int b2) { return count[a] < count[b2]; });
  for (int pos = 0; pos < sp.n5; ++pos) new_of[old_of[pos]] = pos;

  detail::BuiltEchelon e5 = detail::build_fill_echelon(std::move(rows5), sp.n5, p, new_of);
  detail::BuiltEchelon e4 = detail::build_fill_echelon(std::move(rows4), sp.n5, p, new_of);
  sp.r5 = e5.ech.rank();
  sp.r4 = e4.ech.rank();
  sp.b = sp.n5 - sp.r4 - sp.r5;
  assert(sp.b >= 0);
  if (sp.b == 0) return sp;

  // functionals: kernel vectors of the d^4 span, independent modulo the row
  // space of d^5
  FpEchelon acc(p, sp.n5);
  for (int c = 0; c < sp.n5 && (int)sp.f.size() < sp.b; ++c) {
    if (e4.piv_row_of[c] >= 0) continue;
    SparseRow x = detail::echelon_kernel_vector(e4, c, p);
    SparseRow red = e5.ech.reduce(x);
    if (red.empty() || !acc.insert(std::move(red))) continue;
    std::vector<i64> dense(sp.n5, 0);
    for (const auto& [cc, v] : x) dense[old_of[cc]] = v;
    sp.f.push_back(std::move(dense));
  }
  assert((int)sp.f.size() == sp.b && "dual class count must equal the Betti number");

  // cycle representatives with invertible pairing against the functionals
  std::vector<std::vector<i64>> g;       // accepted pairing columns
  std::vector<std::vector<i64>> g_ech;   // small echelon for rank growth
  for (int c = 0; c < sp.n5 && (int)sp.z.size() < sp.b; ++c) {
    if (e5.piv_row_of[c] >= 0) continue;
    SparseRow zc = detail::echelon_kernel_vector(e5, c, p);
    std::vector<i64> dense(sp.n5, 0);
    for (const auto& [cc, v] : zc) dense[old_of[cc]] = v;
    std::vector<i64> y(sp.b, 0);
    for (int i = 0; i < sp.b; ++i) {
      i64 s = 0;
      for (const auto& [cc, v] : zc) s = (s + (__int128)sp.f[i][old_of[cc]] * v) % p;
      y[i] = s;
    }
    // does y extend the span of accepted pairing columns?
    std::vector<i64> red = y;
    for (const auto& er : g_ech) {
      int lead = -1;
      for (int t = 0; t < sp.b; ++t)
        if (er[t]) {
          lead = t;
          break;
        }
      if (red[lead]) {
        i64 fct = red[lead] * mod_inv(er[lead], p) % p;
        for (int t = 0; t < sp.b; ++t) red[t] = mod_pos(red[t] - fct * er[t], p);
      }
    }
    bool indep = false;
    for (int t = 0; t < sp.b; ++t) indep |= (red[t] != 0);
    if (!indep) continue;
    g_ech.push_back(red);
    g.push_back(y);
    sp.z.push_back(std::move(dense));
  }
  assert((int)sp.z.size() == sp.b && "cycle classes must span H^5");
  std::vector<std::vector<i64>> gm(sp.b, std::vector<i64>(sp.b));
  for (int i = 0; i < sp.b; ++i)
    for (int j = 0; j < sp.b; ++j) gm[i][j] = g[j][i];
  sp.ginv = detail::fp_dense_inverse(std::move(gm), p);
  return sp;
}

// ---------------------------------------------------------------------------
// The Hecke session: tautological lifts, per-cell image cache, matrices

class HeckeSession {
 public:
  HeckeSession(const EquivariantComplex& cx, i64 p, ReduceOptions ropt = {})
      : cx_(&cx), p_(p), ropt_(ropt) {
    space_ = h5_space(cx, p);
    build_tautological_lifts();
  }

  const EquivariantComplex& complex() const { return *cx_; }
  const H5Space& space() const { return space_; }
  i64 prime() const { return p_; }
  int dim() const { return space_.b; }

  // tautological sharbly term of a degree-5 basis element, with the sign
  // making its degree-5 image the basis element itself
  const std::pair<Sharbly1, int>& tautological(int basis_index) const {
    return taut_[basis_index];
  }

  // the sharbly cycle representing the j-th H^5 basis class
  Chain1 basis_cycle(int j) const {
    Chain1 ch;
    const auto& zv = space_.z[j];
    for (int c = 0; c < space_.n5; ++c)
      if (zv[c]) chain_add<5>(ch, taut_[c].first.v, taut_[c].second * zv[c], p_);
    return ch;
  }

  // degree-5 coordinates of T(ell,k) applied to the j-th basis cycle.  The
  // translated chain of a full cycle is again a cycle modulo the level group;
  // the reduction relies on that balance, so whole cycles are reduced rather
  // than their individual terms.
  std::vector<i64> cycle_image_coords(int ell, int k, int j, ReduceReport* rep = nullptr) {
    DoubleCosetData dc = double_coset_reps(ell, k, &cx_->coset);
    Chain1 chain;
    const auto& zv = space_.z[j];
    for (int c = 0; c < space_.n5; ++c) {
      if (!zv[c]) continue;
      const auto& [tup, sgn] = taut_[c];
      for (const Mat4& h : dc.reps) {
        std::array<Vec4, 5> mapped;
        for (int i = 0; i < 5; ++i) mapped[i] = vec_primitive(vec_mul(tup.v[i], h));
        chain_add<5>(chain, mapped, (i64)sgn * zv[c], p_);
      }
    }
    assert(chain1_is_cycle(chain, cx_->coset, p_));
    return reduce_to_coords(*cx_, std::move(chain), p_, ropt_, rep);
  }

  // matrix of T(ell,k) on H^5 in the basis of the cycle representatives
  // (column-vector convention: column j is the image of class j)
  FpMat hecke_matrix(int ell, int k) {
    if (cx_->N % ell == 0)
      throw std::invalid_argument("T(ell,k) needs ell coprime to the level");
    FpMat m(space_.b, std::vector<i64>(space_.b, 0));
    for (int j = 0; j < space_.b; ++j) {
      std::vector<i64> y = cycle_image_coords(ell, k, j);
      std::vector<i64> col = space_.class_coords(y);
      for (int i = 0; i < space_.b; ++i) m[i][j] = col[i];
    }
    return m;
  }

 private:
  void build_tautological_lifts() {
    taut_.resize(space_.n5);
    for (std::size_t slot = 0; slot < cx_->degree_cells[5].size(); ++slot) {
      int ci = cx_->degree_cells[5][slot];
      const Cell& c = cx_->sys->cells[ci];
      const CellOrbitTable& tab = cx_->tables[ci];
      for (std::size_t o = 0; o < tab.rep_of.size(); ++o) {
        if (!tab.alive[o]) continue;
        int idx = cx_->offsets[5][slot] + tab.pos[o];
        Mat4 g = mat_inverse_unimodular(cx_->coset.lift(tab.rep_of[o]));
        std::array<Vec4, 5> lines;
        for (int i = 0; i < 5; ++i) lines[i] = vec_mul(c.lines[i], g);
        int s = detail::line_tuple_normalize<5>(lines);
        assert(s != 0);
        Sharbly1 tup{lines};
        ReducedMatch m = match_reduced_tuple(*cx_, tup);
        assert(m.terminal);
        assert(m.basis_index == idx && "tautological lift must recognize itself");
        assert(m.sign == 1 || m.sign == -1);
        taut_[idx] = {tup, m.sign};
      }
    }
  }

  const EquivariantComplex* cx_;
  i64 p_;
  ReduceOptions ropt_;
  H5Space space_;
  std::vector<std::pair<Sharbly1, int>> taut_;
};

} // namespace sl4cohom
