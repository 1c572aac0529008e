#include <catch2/catch_amalgamated.hpp>

#include "sl4cohom/fppoly.hpp"
#include "sl4cohom/templates.hpp"

#include <fstream>
#include <map>

using namespace sl4cohom;

namespace {

FormsData load_fixtures() { return load_forms_fixtures(); }

const TemplateInstance& find_one(const std::vector<TemplateInstance>& ts,
                                 const std::string& label, int dim) {
  const TemplateInstance* hit = nullptr;
  for (const auto& t : ts)
    if (t.label == label && t.dim == dim) {
      REQUIRE(hit == nullptr);
      hit = &t;
    }
  REQUIRE(hit != nullptr);
  return *hit;
}

std::int64_t mod_reduce(const mpz_class& v, std::int64_t q) {
  mpz_class r = v % q;
  if (r < 0) r += q;
  return r.get_si();
}

} // namespace

TEST_CASE("level 11 templates at ell=2 match the worked expansions") {
  FormsData d = load_fixtures();
  auto ts = eisenstein_templates(11, 2, d);
  REQUIRE(ts.size() == 2); // one weight-2 orbit, no eligible weight-4, no GL(3)
  const auto& iia = find_one(ts, "IIa", 1);
  const auto& iib = find_one(ts, "IIb", 1);
  REQUIRE(iia.poly == ZPoly{1, -10, 10, 40, 64});
  REQUIRE(iib.poly == ZPoly{1, 5, 10, -80, 64});

  mpz_class pa[3], pb[3];
  REQUIRE(packet_from_quartic(iia.poly, 2, pa));
  REQUIRE(packet_from_quartic(iib.poly, 2, pb));
  REQUIRE(pa[0] == 10);
  REQUIRE(pa[1] == 5);
  REQUIRE(pa[2] == -5);
  REQUIRE(pb[0] == -5);
  REQUIRE(pb[1] == 5);
  REQUIRE(pb[2] == 10);
  REQUIRE(quartic_from_packet(pa[0], pa[1], pa[2], 2) == iia.poly);

  // ell = 3: a_3 = -1, so IIa = (1-9T)(1-27T)(1+T+3T^2)
  auto t3 = eisenstein_templates(11, 3, d);
  REQUIRE(find_one(t3, "IIa", 1).poly == ZPoly{1, -35, 210, 135, 729});
}

TEST_CASE("IIa and IIb of an orbit are exchanged by the duality reversal") {
  FormsData d = load_fixtures();
  for (int p : {11, 37, 53}) {
    for (int ell : {2, 3}) {
      auto ts = eisenstein_templates(p, ell, d);
      std::map<std::string, const TemplateInstance*> iia, iib;
      for (const auto& t : ts) {
        if (t.label == "IIa") iia[t.source] = &t;
        if (t.label == "IIb") iib[t.source] = &t;
      }
      REQUIRE(!iia.empty());
      REQUIRE(iia.size() == iib.size());
      for (const auto& [src, ta] : iia) {
        REQUIRE(iib.count(src) == 1);
        REQUIRE(dual_reverse(ta->poly, ell) == iib[src]->poly);
        REQUIRE(dual_reverse(iib[src]->poly, ell) == ta->poly);
      }
    }
  }
}

TEST_CASE("level 53 template set accounts for the full predicted dimension") {
  FormsData d = load_fixtures();
  auto ts = eisenstein_templates(53, 2, d);
  // weight-2 orbit dims {1,3} -> IIa+IIb each; weight-4 eps=-1 dims {1,4} ->
  // IV each; one GL(3) pair -> IIIa+IIIb
  REQUIRE(ts.size() == 8);
  int total = 0;
  for (const auto& t : ts) {
    REQUIRE(t.poly[0] == 1);
    REQUIRE(z_deg(t.poly) == 4 * t.dim);
    total += t.dim;
  }
  REQUIRE(total == predict_dimension(53, d).total());

  const auto& iiia = find_one(ts, "IIIa", 2);
  const auto& iiib = find_one(ts, "IIIb", 2);
  // gamma + conj(gamma) = -4 for the recorded pair, so the degree-8 products
  // open with 1 - 12T and 1 + 6T, and close with l^12 = 4096
  REQUIRE(iiia.poly[1] == -12);
  REQUIRE(iiib.poly[1] == 6);
  REQUIRE(iiia.poly.back() == 4096);
  REQUIRE(iiib.poly.back() == 4096);
}

TEST_CASE("orbit products agree with root-by-root products mod a split prime") {
  FormsData d = load_fixtures();
  // the dim-3 weight-2 orbit at level 53 exercises the resultant formula
  const NewformOrbit* orbit = nullptr;
  for (const auto& o : d.gl2)
    if (o.level == 53 && o.weight == 2 && o.dim == 3) orbit = &o;
  REQUIRE(orbit != nullptr);
  const ZPoly& c = *orbit->charpoly_at(2);
  const auto& ts = eisenstein_templates(53, 2, d);
  const TemplateInstance* iia = nullptr;
  for (const auto& t : ts)
    if (t.label == "IIa" && t.dim == 3) iia = &t;
  REQUIRE(iia != nullptr);

  bool checked = false;
  for (std::int64_t q : {31991LL, 12379LL, 101LL, 103LL, 107LL, 109LL, 113LL,
                         127LL, 131LL, 137LL, 139LL, 149LL, 151LL, 157LL,
                         163LL, 167LL, 173LL, 179LL, 181LL, 191LL, 193LL,
                         197LL, 199LL, 211LL, 223LL, 227LL, 229LL, 233LL,
                         239LL, 241LL, 251LL, 257LL, 263LL, 269LL, 271LL,
                         277LL, 281LL, 283LL, 293LL, 307LL}) {
    FpPoly cq(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) cq[i] = mod_reduce(c[i], q);
    auto roots = fp_roots(cq, q);
    int nroots = 0;
    for (const auto& [r, m] : roots) nroots += m;
    if (nroots != 3) continue;
    // product over roots of (1-4T)(1-8T)(1 - rT + 2T^2) in F_q[T]
    FpPoly prod = {1};
    for (const auto& [r, m] : roots)
      for (int i = 0; i < m; ++i) {
        FpPoly quart = fp_mul(fp_mul({1, q - 4}, {1, q - 8}, q),
                              {1, (q - r) % q, 2}, q);
        prod = fp_mul(prod, quart, q);
      }
    FpPoly got(iia->poly.size());
    for (std::size_t i = 0; i < iia->poly.size(); ++i)
      got[i] = mod_reduce(iia->poly[i], q);
    REQUIRE(got == prod);
    checked = true;
    break;
  }
  REQUIRE(checked);
}

TEST_CASE("missing eigenvalue data raises or reports a gap") {
  FormsData d = load_fixtures();
  // the GL(3) pairs at 61 and 79 ship dimension-only records
  REQUIRE_THROWS_AS(eisenstein_templates(61, 2, d), DataGapError);
  REQUIRE_THROWS_WITH(eisenstein_templates(61, 2, d),
                      Catch::Matchers::ContainsSubstring("gl3:61.0"));

  std::vector<std::string> gaps;
  auto ts = eisenstein_templates(61, 2, d, /*strict=*/false, &gaps);
  REQUIRE(gaps.size() == 1);
  REQUIRE_THAT(gaps[0], Catch::Matchers::ContainsSubstring("T(2,1)"));
  int total = 0;
  for (const auto& t : ts) {
    REQUIRE(t.label != "IIIa");
    REQUIRE(t.label != "IIIb");
    total += t.dim;
  }
  auto pb = predict_dimension(61, d);
  REQUIRE(total == pb.weight2 + pb.weight4);

  REQUIRE_THROWS_AS(eisenstein_templates(12, 2, d), std::invalid_argument);
}
