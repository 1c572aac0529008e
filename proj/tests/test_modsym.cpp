#include <catch2/catch_amalgamated.hpp>

#include "sl4cohom/modsym.hpp"

#include <map>

using namespace sl4cohom;

namespace {

bool q_is_zero(const QVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

bool q_equal(const QMat& a, const QMat& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != b[i][j]) return false;
  }
  return true;
}

// scalar eigenvalue of a 1x1 or scalar block
mpq_class scalar_of(const QMat& m) {
  REQUIRE(!m.empty());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (i != j) REQUIRE(m[i][j] == 0);
  for (std::size_t i = 1; i < m.size(); ++i) REQUIRE(m[i][i] == m[0][0]);
  return m[0][0];
}

} // namespace

TEST_CASE("level 11 weight 2: dimensions, eigenvalues, level involution") {
  ModularSymbolSpace ms(11, 2);
  REQUIRE(ms.quotient_dim() == 3);
  REQUIRE(ms.cuspidal_plus_dim() == 1);
  REQUIRE(scalar_of(ms.hecke_on_plus(2)) == -2);
  REQUIRE(scalar_of(ms.hecke_on_plus(3)) == -1);
  REQUIRE(scalar_of(ms.hecke_on_plus(5)) == 1);
  REQUIRE(scalar_of(ms.hecke_on_plus(7)) == -2);
  REQUIRE(scalar_of(ms.fricke_on_plus()) == -1);

  auto orbits = ms.newform_orbits({2, 3, 5, 7});
  REQUIRE(orbits.size() == 1);
  REQUIRE(orbits[0].dim == 1);
  REQUIRE(orbits[0].eps == 1); // eps = -w for weight 2
  const ZPoly* t2 = orbits[0].charpoly_at(2);
  REQUIRE(t2 != nullptr);
  REQUIRE(*t2 == ZPoly{2, 1}); // T + 2, i.e. eigenvalue -2
}

TEST_CASE("level 37 weight 2: two rational orbits with opposite signs") {
  ModularSymbolSpace ms(37, 2);
  REQUIRE(ms.cuspidal_plus_dim() == 2);
  auto orbits = ms.newform_orbits({2, 3});
  REQUIRE(orbits.size() == 2);
  std::map<long, int> eps_of_a2;
  for (const auto& o : orbits) {
    REQUIRE(o.dim == 1);
    const ZPoly* t2 = o.charpoly_at(2);
    REQUIRE(t2 != nullptr);
    long a2 = -(*t2)[0].get_si(); // root of T - a2
    eps_of_a2[a2] = o.eps;
  }
  // a2 = -2 orbit: Fricke +1 hence eps = -1; a2 = 0 orbit: Fricke -1, eps = +1
  REQUIRE(eps_of_a2.count(-2) == 1);
  REQUIRE(eps_of_a2.count(0) == 1);
  REQUIRE(eps_of_a2[-2] == -1);
  REQUIRE(eps_of_a2[0] == 1);
}

TEST_CASE("level 5 weight 4: eigenvalues and involution normalization") {
  ModularSymbolSpace ms(5, 4);
  REQUIRE(ms.cuspidal_plus_dim() == 1);
  REQUIRE(scalar_of(ms.hecke_on_plus(2)) == -4);
  REQUIRE(scalar_of(ms.hecke_on_plus(3)) == 2);
  REQUIRE(scalar_of(ms.fricke_on_plus()) == 5); // w = +1 times 5^((4-2)/2)
  auto orbits = ms.newform_orbits({2, 3, 7});
  REQUIRE(orbits.size() == 1);
  REQUIRE(orbits[0].eps == 1); // eps = +w for weight 4
}

TEST_CASE("level 53 weight 2: orbit degrees 1 and 3") {
  ModularSymbolSpace ms(53, 2);
  REQUIRE(ms.cuspidal_plus_dim() == 4);
  auto orbits = ms.newform_orbits({2, 3, 5, 7, 11, 13});
  REQUIRE(orbits.size() == 2);
  REQUIRE(orbits[0].dim == 1);
  REQUIRE(orbits[1].dim == 3);
  for (const auto& o : orbits) {
    for (const auto& pr : o.ap) REQUIRE((int)pr.second.size() == o.dim + 1);
  }
}

TEST_CASE("level 53 weight 4: sign split 5 + 8 with eps=-1 degrees {1,4}") {
  ModularSymbolSpace ms(53, 4);
  REQUIRE(ms.cuspidal_plus_dim() == 13);
  auto orbits = ms.newform_orbits({2, 3});
  int dim_minus = 0, dim_plus = 0;
  std::vector<int> minus_degrees;
  for (const auto& o : orbits) {
    if (o.eps == -1) {
      dim_minus += o.dim;
      minus_degrees.push_back(o.dim);
    } else {
      dim_plus += o.dim;
    }
  }
  std::sort(minus_degrees.begin(), minus_degrees.end());
  REQUIRE(dim_minus == 5);
  REQUIRE(dim_plus == 8);
  REQUIRE(minus_degrees == std::vector<int>{1, 4});
}

TEST_CASE("relations are killed by quotient, star, Hecke, and boundary") {
  for (auto [n, k] : {std::pair<int, int>{11, 2}, {7, 4}}) {
    ModularSymbolSpace ms(n, k);
    const QMat& rel = ms.relation_rows();
    QMat star = ms.star_on_quotient();
    for (const auto& row : rel) {
      // quotient coordinates of every relation row vanish
      REQUIRE(q_is_zero(ms.to_quotient(row)));
    }
    // star of a quotient class is independent of representative: check star
    // composed with quotient on generator-level star images of relations
    int w = k - 2;
    int ngens = (w + 1) * (n + 1);
    (void)ngens;
    // star^2 = identity on the quotient
    REQUIRE(q_equal(q_mul(star, star), q_identity(ms.quotient_dim())));
  }
}

TEST_CASE("level involution squares to N^(k-2) and commutes with Hecke") {
  for (auto [n, k] : {std::pair<int, int>{11, 2}, {5, 4}, {13, 4}}) {
    ModularSymbolSpace ms(n, k);
    QMat w_op = ms.fricke_on_quotient();
    QMat w2 = q_mul(w_op, w_op);
    mpq_class expect = 1;
    for (int i = 0; i < k - 2; ++i) expect *= n;
    QMat id = q_identity(ms.quotient_dim());
    for (auto& row : id)
      for (auto& x : row) x *= expect;
    REQUIRE(q_equal(w2, id));
    if (ms.cuspidal_plus_dim() > 0) {
      QMat t2 = ms.hecke_on_plus(2);
      QMat t3 = ms.hecke_on_plus(3);
      QMat wp = ms.fricke_on_plus();
      REQUIRE(q_equal(q_mul(t2, t3), q_mul(t3, t2)));
      REQUIRE(q_equal(q_mul(t2, wp), q_mul(wp, t2)));
    }
  }
}

TEST_CASE("boundary map annihilates relation rows") {
  for (auto [n, k] : {std::pair<int, int>{11, 2}, {7, 4}}) {
    ModularSymbolSpace ms(n, k);
    // boundary of the quotient image of each relation row must vanish; the
    // quotient image is zero, so instead check consistency directly: boundary
    // of cuspidal plus-space basis vectors vanishes
    QMat bnd = ms.boundary_on_quotient();
    for (int t = 0; t < ms.cuspidal_plus_dim(); ++t) {
      // plus basis rows are in the kernel by construction; re-verify through
      // the public interface via Hecke stability of the cuspidal space:
      // T_2 preserves ker(boundary)
      QMat t2 = ms.hecke_on_quotient(2);
      QMat prod = q_mul(bnd, t2); // boundary after Hecke
      // rows of prod must be combinations of rows of bnd (Hecke preserves
      // the cuspidal subspace), i.e. rank doesn't grow
      QMat stacked = bnd;
      for (const auto& r : prod) stacked.push_back(r);
      REQUIRE(q_rank(stacked) == q_rank(bnd));
      break;
    }
  }
}

TEST_CASE("level 53 data feeds the worked dimension prediction 8+5+4") {
  FormsData data;
  {
    ModularSymbolSpace w2(53, 2);
    for (auto& o : w2.newform_orbits({2})) data.gl2.push_back(o);
    ModularSymbolSpace w4(53, 4);
    for (auto& o : w4.newform_orbits({2})) data.gl2.push_back(o);
  }
  data.gl3.push_back(builtin_gl3_level53());
  PredictionBreakdown b = predict_dimension(53, data);
  REQUIRE(b.weight2 == 8);
  REQUIRE(b.weight4 == 5);
  REQUIRE(b.gl3 == 4);
  REQUIRE(b.total() == 17);
}
