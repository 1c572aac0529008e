#include <catch2/catch_amalgamated.hpp>

#include "sl4cohom/quadform.hpp"

#include <random>
#include <set>

using namespace sl4cohom;

namespace {

// Brute-force box search: all vectors with value <= bound, one per {v,-v}.
// The box radii are rigorous: x G x^T <= B implies x_i^2 <= B adj(G)_ii / det(G).
// Independent of the LDL^T enumeration.
std::vector<std::pair<Vec4, i64>> box_short_vectors(const Mat4& g, i64 bound) {
  Mat4 adj = adjugate4(g);
  i64 det = det4(g);
  REQUIRE(det > 0);
  std::array<i64, 4> box{};
  for (int i = 0; i < 4; ++i) {
    box[i] = (i64)std::ceil(std::sqrt((double)bound * (double)adj[i][i] / (double)det)) + 1;
    REQUIRE(box[i] <= 40); // keep the oracle tractable
  }
  std::map<Vec4, i64> found;
  Vec4 x{};
  for (x[0] = -box[0]; x[0] <= box[0]; ++x[0])
    for (x[1] = -box[1]; x[1] <= box[1]; ++x[1])
      for (x[2] = -box[2]; x[2] <= box[2]; ++x[2])
        for (x[3] = -box[3]; x[3] <= box[3]; ++x[3]) {
          if (vec_is_zero(x)) continue;
          i64 v = qeval(g, x);
          if (v <= bound) found.emplace(vec_line_rep(x), v);
        }
  return {found.begin(), found.end()};
}

const Mat4 kGramD4 = {{{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}}};
const Mat4 kGramA4 = {{{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}}};

Mat4 random_sl4(std::mt19937& rng, int steps = 10, int amp = 2) {
  std::uniform_int_distribution<int> idx(0, 3), val(-amp, amp);
  Mat4 g = mat_identity();
  for (int s = 0; s < steps; ++s) {
    int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    Mat4 e = mat_identity();
    e[i][j] = val(rng);
    g = mat_mul(g, e);
  }
  return g;
}

} // namespace

TEST_CASE("identity form has minimum 1 with the 4 coordinate vectors") {
  MinVectors mv = minimal_vectors(mat_identity());
  REQUIRE(mv.min == 1);
  REQUIRE(mv.vecs.size() == 4);
  for (const auto& v : mv.vecs) REQUIRE(qeval(mat_identity(), v) == 1);
}

TEST_CASE("the two quaternary root forms have minimum 2 with 12 and 10 vector pairs") {
  MinVectors d4 = minimal_vectors(kGramD4);
  REQUIRE(d4.min == 2);
  REQUIRE(d4.vecs.size() == 12);

  MinVectors a4 = minimal_vectors(kGramA4);
  REQUIRE(a4.min == 2);
  REQUIRE(a4.vecs.size() == 10);
}

TEST_CASE("both root forms are perfect: minimal vectors span the 10-dim symmetric space") {
  for (const Mat4& g : {kGramD4, kGramA4}) {
    MinVectors mv = minimal_vectors(g);
    IMat rows;
    for (const auto& v : mv.vecs) {
      Sym10 s = sym_pack(outer_sym(v));
      rows.push_back(std::vector<i64>(s.begin(), s.end()));
    }
    REQUIRE(imat_rank(rows) == 10);
  }
}

TEST_CASE("short vector enumeration matches brute-force box search") {
  std::mt19937 rng(2024);
  std::vector<std::pair<Mat4, i64>> cases = {
      {mat_identity(), 3}, {kGramD4, 4}, {kGramA4, 4}};
  std::uniform_int_distribution<int> val(-2, 2);
  for (int t = 0; t < 12; ++t) {
    // random positive definite gram B B^T with B invertible
    Mat4 b{};
    do {
      for (auto& row : b)
        for (auto& x : row) x = val(rng);
    } while (std::abs(det4(b)) < 3); // avoid extremely skew lattices
    Mat4 g = mat_mul(b, mat_transpose(b));
    cases.push_back({g, std::min<i64>(g[0][0], 6)});
  }
  for (const auto& [g, bound] : cases) {
    auto fast = short_vectors(g, bound);
    auto slow = box_short_vectors(g, bound);
    REQUIRE(fast == slow);
  }
}

TEST_CASE("minimal vectors transform correctly under unimodular change of basis") {
  std::mt19937 rng(555);
  for (int t = 0; t < 15; ++t) {
    Mat4 h = random_sl4(rng);
    for (const Mat4& g : {kGramD4, kGramA4}) {
      Mat4 gh = mat_mul(h, mat_mul(g, mat_transpose(h))); // pullback under v -> v h
      MinVectors a = minimal_vectors(g), bm = minimal_vectors(gh);
      REQUIRE(a.min == bm.min);
      REQUIRE(a.vecs.size() == bm.vecs.size());
      Mat4 hinv = mat_inverse_unimodular(h);
      std::set<Vec4> expect;
      for (const auto& v : a.vecs) expect.insert(vec_line_rep(vec_mul(v, hinv)));
      std::set<Vec4> got(bm.vecs.begin(), bm.vecs.end());
      REQUIRE(expect == got);
    }
  }
}

TEST_CASE("trace pairing against rank-one forms evaluates the form") {
  std::mt19937 rng(808);
  std::uniform_int_distribution<int> val(-5, 5);
  for (int t = 0; t < 50; ++t) {
    Mat4 a{};
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) a[i][j] = a[j][i] = val(rng);
    Vec4 v = {val(rng), val(rng), val(rng), val(rng)};
    REQUIRE(pair_sym(sym_pack(a), sym_pack(outer_sym(v))) == (i128)qeval(a, v));
  }
}

TEST_CASE("positive definiteness test agrees with eigen-sign behaviour") {
  REQUIRE(is_positive_definite(mat_identity()));
  REQUIRE(is_positive_definite(kGramD4));
  REQUIRE(is_positive_definite(kGramA4));
  Mat4 indef = mat_identity();
  indef[0][0] = -1;
  REQUIRE(!is_positive_definite(indef));
  Mat4 sing{}; // rank deficient
  sing[0][0] = 1;
  REQUIRE(!is_positive_definite(sing));
}
