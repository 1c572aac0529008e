#include <catch2/catch_amalgamated.hpp>

#include "sl4cohom/sparse.hpp"

#include <map>
#include <random>

using namespace sl4cohom;
using i64 = std::int64_t;

namespace {

// textbook dense Gaussian elimination mod p, used as the reference
int dense_rank_mod_p(std::vector<std::vector<i64>> a, i64 p) {
  for (auto& row : a)
    for (auto& x : row) x = mod_pos(x, p);
  int m = (int)a.size(), n = a.empty() ? 0 : (int)a[0].size();
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
    i64 inv = mod_inv(a[rank][col], p);
    for (int j = col; j < n; ++j) a[rank][j] = a[rank][j] * inv % p;
    for (int i = 0; i < m; ++i) {
      if (i == rank || !a[i][col]) continue;
      i64 f = a[i][col];
      for (int j = col; j < n; ++j) a[i][j] = mod_pos(a[i][j] - f * a[rank][j], p);
    }
    ++rank;
  }
  return rank;
}

std::vector<std::vector<i64>> random_dense(std::mt19937& rng, int m, int n, int density_pct) {
  std::uniform_int_distribution<int> ent(-20, 20);
  std::uniform_int_distribution<int> pct(0, 99);
  std::vector<std::vector<i64>> a(m, std::vector<i64>(n, 0));
  for (auto& row : a)
    for (auto& x : row)
      if (pct(rng) < density_pct) x = ent(rng);
  return a;
}

SparseIntMat to_sparse(const std::vector<std::vector<i64>>& a) {
  SparseIntMat s;
  s.rows = (int)a.size();
  s.cols = a.empty() ? 0 : (int)a[0].size();
  for (int i = 0; i < s.rows; ++i)
    for (int j = 0; j < s.cols; ++j)
      if (a[i][j]) s.add(i, j, a[i][j]);
  return s;
}

} // namespace

TEST_CASE("sparse rank matches dense elimination on 100 random matrices", "[sparse]") {
  std::mt19937 rng(20260823);
  const i64 primes[2] = {31991, 12379};
  std::uniform_int_distribution<int> md(1, 18), nd(1, 18), dd(5, 90);
  for (int trial = 0; trial < 100; ++trial) {
    int m = md(rng), n = nd(rng);
    auto a = random_dense(rng, m, n, dd(rng));
    i64 p = primes[trial % 2];
    int want = dense_rank_mod_p(a, p);
    REQUIRE(rank_mod_p(to_sparse(a), p) == want);
  }
}

TEST_CASE("sparse kernel vectors annihilate the matrix and span the right dimension",
          "[sparse]") {
  std::mt19937 rng(555);
  const i64 p = 31991;
  for (int trial = 0; trial < 30; ++trial) {
    int m = 6 + (int)(rng() % 8), n = 6 + (int)(rng() % 8);
    auto a = random_dense(rng, m, n, 40);
    auto sp = to_sparse(a);
    auto ker = kernel_mod_p(sp, p);
    int r = dense_rank_mod_p(a, p);
    REQUIRE((int)ker.size() == n - r);
    for (const auto& kv : ker) {
      std::vector<i64> x(n, 0);
      for (const auto& [j, v] : kv) x[j] = v;
      for (int i = 0; i < m; ++i) {
        i64 acc = 0;
        for (int j = 0; j < n; ++j) acc = mod_pos(acc + a[i][j] % p * x[j], p);
        REQUIRE(acc == 0);
      }
      REQUIRE(!kv.empty());
    }
    // kernel vectors are independent: stack them and rank must equal their count
    SparseIntMat km;
    km.rows = (int)ker.size();
    km.cols = n;
    for (int i = 0; i < km.rows; ++i)
      for (const auto& [j, v] : ker[i]) km.add(i, j, v);
    REQUIRE(rank_mod_p(km, p) == (int)ker.size());
  }
}

TEST_CASE("echelon reduce expresses rows as residual plus tracked combination",
          "[sparse]") {
  std::mt19937 rng(808);
  const i64 p = 12379;
  FpEchelon ech(p, 24);
  std::vector<SparseRow> inserted;
  auto rand_row = [&]() {
    SparseRow r;
    for (int j = 0; j < 24; ++j)
      if (rng() % 3 == 0) r.push_back({j, (i64)(rng() % 2000) - 1000});
    return r;
  };
  for (int i = 0; i < 15; ++i) {
    auto r = rand_row();
    inserted.push_back(r);
    ech.insert(r, i);
  }
  std::map<int, int> row_of_tag;
  for (int i = 0; i < (int)ech.tags().size(); ++i) row_of_tag[ech.tags()[i]] = i;
  for (int t = 0; t < 20; ++t) {
    auto r = rand_row();
    std::vector<std::pair<int, i64>> used;
    auto residual = ech.reduce(r, &used);
    // reconstruct: residual + sum coef * stored_row(tag) == original (mod p)
    std::vector<i64> acc(24, 0);
    for (const auto& [c, v] : residual) acc[c] = mod_pos(acc[c] + v, p);
    for (const auto& [tag, coef] : used) {
      const auto& srow = ech.rows()[row_of_tag.at(tag)];
      for (const auto& [c, v] : srow) acc[c] = mod_pos(acc[c] + coef * v % p, p);
    }
    for (const auto& [c, v] : r) acc[c] = mod_pos(acc[c] - v, p);
    for (i64 v : acc) REQUIRE(v == 0);
  }
}
