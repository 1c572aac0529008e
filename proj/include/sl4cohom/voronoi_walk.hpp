#pragma once
// Locate the perfect-form cone containing a given positive definite symmetric
// matrix.  The walk is the simplex method on the polyhedron
// { A : A[v] >= min for all primitive v } with objective <A, Q>: starting from
// a known perfect form, repeatedly cross a facet of the current minimal-vector
// cone whose inward normal pairs negatively with Q.  Each crossing strictly
// decreases the objective over the (finitely many) vertices below the start,
// so the walk terminates with Q inside the cone of the final form.
//
// All geometry is precomputed once in standard position: for each of the two
// perfect-form classes, every facet of its minimal-vector cone together with
// the class of the contiguous form and the unimodular change of basis into
// standard position.  A walk step then only transforms Q and composes the
// accumulated basis change; no minimal-vector computations happen at runtime.

#include "sl4cohom/perfect.hpp"

#include <numeric>

namespace sl4cohom {

struct PerfectGraph {
  struct Arc {
    Mat4 normal;  // inward facet normal, standard position
    int to_class; // class of the contiguous form
    Mat4 trans;   // h with (neighbor form) = h * (standard to_class form) * h^T
  };
  struct Node {
    PerfectForm form;
    std::vector<Arc> arcs;
  };
  std::vector<Node> nodes;
  int start = 0; // index of the D4-type class
};

inline const PerfectGraph& perfect_graph() {
  static const PerfectGraph g = [] {
    PerfectGraph pg;
    for (const PerfectForm& f : enumerate_perfect_forms()) pg.nodes.push_back({f, {}});
    PerfectForm d4 = make_perfect_form(gram_d4());
    pg.start = -1;
    for (int i = 0; i < (int)pg.nodes.size(); ++i)
      if (forms_equivalent(pg.nodes[i].form, d4)) pg.start = i;
    assert(pg.start >= 0);
    for (auto& node : pg.nodes) {
      for (const PerfectConeFacet& f : perfect_cone_facets(node.form)) {
        PerfectForm nb = neighbor_form(node.form, f.normal);
        int cls = -1;
        Mat4 h{};
        for (int j = 0; j < (int)pg.nodes.size(); ++j) {
          if (auto iso = form_isometry(pg.nodes[j].form, nb)) {
            cls = j;
            h = *iso;
            break;
          }
        }
        assert(cls >= 0 && "every neighbor is one of the enumerated classes");
        node.arcs.push_back({f.normal, cls, h});
      }
    }
    return pg;
  }();
  return g;
}

namespace detail {

inline i64 mat_pair(const Mat4& a, const Mat4& b) {
  i64 s = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      s += a[i][j] * b[i][j];
      assert(std::abs(s) < (i64)4e17);
    }
  return s;
}

} // namespace detail

struct LocateResult {
  int cls = 0;    // node index in perfect_graph()
  Mat4 mi{};      // accumulated transition: q_std = mi^T q mi
  Mat4 q_std{};   // q in the standard coordinates of the final class
  i64 pairing = 0; // <standard form of cls, q_std> = <located form, q>
  int steps = 0;
};

// `salt` rotates the scan order over improving facets; any choice reaches a
// cone containing q, so downstream results must not depend on it.
inline LocateResult voronoi_locate(const Mat4& q, int salt = 0) {
  const PerfectGraph& pg = perfect_graph();
  LocateResult st;
  st.cls = pg.start;
  st.mi = mat_identity();
  st.q_std = q;
  st.pairing = detail::mat_pair(pg.nodes[st.cls].form.gram, st.q_std);
  for (;;) {
    const auto& arcs = pg.nodes[st.cls].arcs;
    int n = (int)arcs.size();
    int pick = -1;
    i64 best = 0;
    for (int t = 0; t < n; ++t) {
      int i = (t + salt) % n;
      i64 pr = detail::mat_pair(arcs[i].normal, st.q_std);
      if (pr < best) {
        best = pr;
        pick = i;
      }
    }
    if (pick < 0) return st; // all facet pairings >= 0: q lies in this cone
    const auto& arc = arcs[pick];
    Mat4 ht = mat_transpose(arc.trans);
    st.q_std = mat_mul(ht, mat_mul(st.q_std, arc.trans));
    st.mi = mat_mul(st.mi, arc.trans);
    st.cls = arc.to_class;
    i64 np = detail::mat_pair(pg.nodes[st.cls].form.gram, st.q_std);
    assert(np < st.pairing && "objective must strictly decrease");
    st.pairing = np;
    ++st.steps;
    assert(st.steps < 100000);
  }
}

// minimal vectors of the located form, back in the original coordinates
inline std::vector<Vec4> located_min_vectors(const LocateResult& st) {
  const PerfectGraph& pg = perfect_graph();
  Mat4 m = mat_inverse_unimodular(st.mi);
  std::vector<Vec4> out;
  for (const Vec4& v : pg.nodes[st.cls].form.min_vecs)
    out.push_back(vec_line_rep(vec_mul(v, m)));
  return out;
}

} // namespace sl4cohom
