#include <catch2/catch_amalgamated.hpp>

#include "sl4cohom/coset.hpp"

#include <numeric>
#include <random>
#include <set>

using namespace sl4cohom;

namespace {

// Independent oracle: count unimodular rows mod N up to unit scaling by brute
// force, never using the canonicalization under test.
int brute_point_count(int n) {
  std::set<std::set<std::array<int, 4>>> orbits;
  std::array<int, 4> r{};
  for (r[0] = 0; r[0] < n; ++r[0])
    for (r[1] = 0; r[1] < n; ++r[1])
      for (r[2] = 0; r[2] < n; ++r[2])
        for (r[3] = 0; r[3] < n; ++r[3]) {
          int g = std::gcd(std::gcd(r[0], r[1]), std::gcd(r[2], std::gcd(r[3], n)));
          if (g != 1) continue;
          std::set<std::array<int, 4>> orb;
          for (int u = 1; u < n; ++u) {
            if (std::gcd(u, n) != 1) continue;
            std::array<int, 4> s;
            for (int i = 0; i < 4; ++i) s[i] = r[i] * u % n;
            orb.insert(s);
          }
          if (n == 1) orb.insert(r);
          orbits.insert(orb);
        }
  return (int)orbits.size();
}

Mat4 random_sl4(std::mt19937& rng, int steps = 8, int amp = 3) {
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

TEST_CASE("point counts at small levels match the brute-force orbit oracle") {
  REQUIRE(CosetSpace(2).size() == 15);
  REQUIRE(CosetSpace(3).size() == 40);
  REQUIRE(CosetSpace(4).size() == 120);
  for (int n = 1; n <= 12; ++n) REQUIRE(CosetSpace(n).size() == brute_point_count(n));
}

TEST_CASE("point count is multiplicative over coprime factors") {
  std::vector<int> sizes(31, 0);
  for (int n = 1; n <= 30; ++n) sizes[n] = CosetSpace(n).size();
  for (int a = 2; a <= 30; ++a)
    for (int b = 2; a * b <= 30; ++b)
      if (std::gcd(a, b) == 1) REQUIRE(sizes[a * b] == sizes[a] * sizes[b]);
}

TEST_CASE("prime levels have p^3 + p^2 + p + 1 points") {
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
                71, 73, 79, 83}) {
    long long expect = (long long)p * p * p + (long long)p * p + p + 1;
    REQUIRE(CosetSpace(p).size() == expect);
  }
}

TEST_CASE("canonicalization is idempotent and constant on unit multiples") {
  std::mt19937 rng(7771);
  for (int n : {2, 5, 6, 12, 30, 53}) {
    CosetSpace cs(n);
    std::uniform_int_distribution<int> val(0, n - 1);
    for (int t = 0; t < 200; ++t) {
      std::array<int, 4> r = {val(rng), val(rng), val(rng), val(rng)};
      int g = std::gcd(std::gcd(r[0], r[1]), std::gcd(r[2], std::gcd(r[3], n)));
      if (g != 1) continue;
      auto c = cs.canonicalize(r);
      REQUIRE(cs.canonicalize(c) == c);
      for (int u = 1; u < n; ++u) {
        if (std::gcd(u, n) != 1) continue;
        std::array<int, 4> s;
        for (int i = 0; i < 4; ++i) s[i] = r[i] * u % n;
        REQUIRE(cs.canonicalize(s) == c);
      }
    }
  }
}

TEST_CASE("the right action satisfies the action axioms") {
  std::mt19937 rng(1212);
  for (int n : {2, 7, 12, 25}) {
    CosetSpace cs(n);
    std::uniform_int_distribution<int> pt(0, cs.size() - 1);
    for (int t = 0; t < 50; ++t) {
      int x = pt(rng);
      REQUIRE(cs.act(x, mat_identity()) == x);
      Mat4 g = random_sl4(rng), h = random_sl4(rng);
      REQUIRE(cs.act(cs.act(x, g), h) == cs.act(x, mat_mul(g, h)));
    }
  }
}

TEST_CASE("the base-point orbit under elementary generators is everything") {
  // elementary matrices E_{ij}(1) generate SL(4,Z)
  std::vector<Mat4> gens;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      Mat4 e = mat_identity();
      e[i][j] = 1;
      gens.push_back(e);
      e[i][j] = -1;
      gens.push_back(e);
    }
  for (int n = 2; n <= 10; ++n) {
    CosetSpace cs(n);
    std::vector<char> seen(cs.size(), 0);
    std::vector<int> stack{cs.base()};
    seen[cs.base()] = 1;
    int count = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const auto& g : gens) {
        int y = cs.act(x, g);
        if (!seen[y]) {
          seen[y] = 1;
          ++count;
          stack.push_back(y);
        }
      }
    }
    REQUIRE(count == cs.size());
  }
}

TEST_CASE("lifts are determinant-one with last row in the point's class") {
  std::mt19937 rng(4040);
  for (int n : {2, 6, 11, 35, 53}) {
    CosetSpace cs(n);
    std::uniform_int_distribution<int> pt(0, cs.size() - 1);
    for (int t = 0; t < 30; ++t) {
      int x = pt(rng);
      Mat4 g = cs.lift(x);
      REQUIRE(det4(g) == 1);
      std::array<int, 4> last;
      for (int i = 0; i < 4; ++i) last[i] = (int)(((g[3][i] % n) + n) % n);
      REQUIRE(cs.canon_index(last) == x);
    }
  }
}
