#include <catch2/catch_amalgamated.hpp>

#include "sl4cohom/zpoly.hpp"

#include <random>

using namespace sl4cohom;

namespace {

ZPoly zp(std::initializer_list<long> coeffs) {
  ZPoly r;
  for (long c : coeffs) r.push_back(c);
  z_trim(r);
  return r;
}

ZPoly product(const std::vector<ZFactor>& fs) {
  ZPoly r{1};
  for (const auto& f : fs)
    for (int i = 0; i < f.mult; ++i) r = z_mul(r, f.poly);
  return r;
}

} // namespace

TEST_CASE("integer poly ring basics") {
  ZPoly a = zp({1, 2, 3});
  ZPoly b = zp({-4, 1});
  ZPoly p = z_mul(a, b);
  REQUIRE(z_div_exact_monic(p, b) == a);
  REQUIRE(z_mod_monic(p, b).empty());
  ZPoly shifted = z_add(p, zp({7}));
  REQUIRE(z_mod_monic(shifted, b) == zp({7}));
  REQUIRE(z_eval(a, 2) == 1 + 4 + 12);
  REQUIRE(z_divides_monic(b, p));
  REQUIRE(!z_divides_monic(b, shifted));
}

TEST_CASE("monic gcd over the rationals") {
  ZPoly a = z_mul(zp({-1, 1}), zp({2, 1}));   // (x-1)(x+2)
  ZPoly b = z_mul(zp({-1, 1}), zp({5, 3}));   // (x-1)(3x+5)
  REQUIRE(z_gcd_monicized(a, b) == zp({-1, 1}));
  REQUIRE(z_gcd_monicized(zp({1, 0, 1}), zp({-1, 1})) == zp({1}));
}

TEST_CASE("factor known products of distinct irreducibles") {
  // (x-1)(x-2)(x^2+8x+32): quadratic has discriminant -64, irreducible
  ZPoly f = z_mul(z_mul(zp({-1, 1}), zp({-2, 1})), zp({32, 8, 1}));
  auto fac = z_factor_monic(f);
  REQUIRE(fac.size() == 3);
  REQUIRE(product(fac) == f);
  bool saw_quad = false;
  for (const auto& g : fac) {
    REQUIRE(g.mult == 1);
    if (g.poly == zp({32, 8, 1})) saw_quad = true;
  }
  REQUIRE(saw_quad);
}

TEST_CASE("x^4+1 is irreducible over Z despite splitting mod every prime") {
  ZPoly f = zp({1, 0, 0, 0, 1});
  auto fac = z_factor_monic(f);
  REQUIRE(fac.size() == 1);
  REQUIRE(fac[0].mult == 1);
  REQUIRE(fac[0].poly == f);
}

TEST_CASE("degree-4 operator polynomials factor as expected") {
  // reversed Hecke polynomial 1+7T+24T^2+56T^3+64T^4 -> monic
  // x^4+7x^3+24x^2+56x+64, which is irreducible over Z
  ZPoly h = zp({64, 56, 24, 7, 1});
  auto fac = z_factor_monic(h);
  REQUIRE(fac.size() == 1);
  REQUIRE(fac[0].poly == h);

  // a product of two integer quadratics must be recovered exactly
  ZPoly q1 = zp({5, -3, 1});
  ZPoly q2 = zp({7, 2, 1});
  auto fac2 = z_factor_monic(z_mul(q1, q2));
  REQUIRE(fac2.size() == 2);
  REQUIRE(fac2[0].poly == q1);
  REQUIRE(fac2[1].poly == q2);
}

TEST_CASE("multiplicities recovered through squarefree reduction") {
  ZPoly f = z_mul(z_mul(zp({-3, 1}), zp({-3, 1})), z_mul(zp({1, 1, 1}), zp({-3, 1})));
  auto fac = z_factor_monic(f); // (x-3)^3 (x^2+x+1)
  REQUIRE(fac.size() == 2);
  long total = 0;
  for (const auto& g : fac) {
    total += (long)(g.mult * z_deg(g.poly));
    if (g.poly == zp({-3, 1})) REQUIRE(g.mult == 3);
    if (g.poly == zp({1, 1, 1})) REQUIRE(g.mult == 1);
  }
  REQUIRE(total == z_deg(f));
  REQUIRE(product(fac) == f);
}

TEST_CASE("random products round-trip") {
  std::mt19937 rng(20260823);
  auto rand_irred = [&](int deg) {
    // random monic poly of given degree, retried until irreducible (checked by
    // factoring it and expecting a single factor)
    while (true) {
      ZPoly g(deg + 1, 0);
      g[deg] = 1;
      for (int i = 0; i < deg; ++i) g[i] = (long)(rng() % 21) - 10;
      auto fs = z_factor_monic(g);
      if (fs.size() == 1 && fs[0].mult == 1) return g;
    }
  };
  for (int trial = 0; trial < 12; ++trial) {
    int nf = 1 + (int)(rng() % 3);
    std::vector<ZPoly> parts;
    ZPoly f{1};
    for (int i = 0; i < nf; ++i) {
      ZPoly g = rand_irred(1 + (int)(rng() % 3));
      parts.push_back(g);
      int mult = 1 + (int)(rng() % 2);
      for (int k = 0; k < mult; ++k) f = z_mul(f, g);
    }
    auto fac = z_factor_monic(f);
    REQUIRE(product(fac) == f);
    // every reported factor is one of the constructed parts (up to the
    // possibility that two random parts coincided, which product() covers)
    for (const auto& g : fac) {
      bool known = false;
      for (const auto& pquad : parts)
        if (g.poly == pquad) known = true;
      REQUIRE(known);
    }
  }
}

TEST_CASE("factor degrees agree with a fresh modular factorization") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    ZPoly f(7, 0);
    f[6] = 1;
    for (int i = 0; i < 6; ++i) f[i] = (long)(rng() % 41) - 20;
    auto zf = z_factor_monic(f);
    REQUIRE(product(zf) == f);
    // over F_p each integer factor splits further or stays; total degree must
    // always match after reducing mod a prime not dividing the discriminant
    const std::int64_t p = 31991;
    FpPoly fp = z_to_fp(f, p);
    auto pf = fp_factor(fp, p);
    long zdeg = 0, pdeg = 0;
    for (const auto& g : zf) zdeg += (long)(g.mult * z_deg(g.poly));
    for (const auto& g : pf) pdeg += (long)(g.mult * fp_deg(g.poly));
    REQUIRE(zdeg == z_deg(f));
    REQUIRE(pdeg == fp_deg(fp));
  }
}
