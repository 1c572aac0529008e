#pragma once
// Hecke-polynomial templates for the boundary (Eisenstein) part of degree-5
// cohomology at prime level: five families, instantiated per newform Galois
// orbit / GL(3) conjugate pair as integer polynomials in T of degree 4*dim.
//
// Degree-4 building blocks at a prime ell (alpha/beta the weight-2/weight-4
// Hecke eigenvalues, gamma a GL(3) T(ell,1) eigenvalue, gamma' its
// conjugate):
//   IIa : (1 - l^2 T)(1 - l^3 T)(1 - alpha T + l T^2)
//   IIb : (1 - T)(1 - l T)(1 - l^2 alpha T + l^5 T^2)
//   IV  : (1 - l T)(1 - l^2 T)(1 - beta T + l^3 T^2)
//   IIIa: (1 - l^3 T)(1 - gamma T + l gamma' T^2 - l^3 T^3)
//   IIIb: (1 - T)(1 - l gamma T + l^3 gamma' T^2 - l^6 T^3)
// For an orbit of degree d the shipped polynomial is the product over the
// Galois conjugates, an integer polynomial of degree 4d.  Since each family
// is linear in the eigenvalue, the product over conjugates is the resultant
// with the orbit's monic characteristic polynomial c:
//   prod_i (A + x_i B) = sum_k c_k (-1)^(d-k) A^k B^(d-k).

#include "sl4cohom/forms.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sl4cohom {

struct DataGapError : std::runtime_error {
  explicit DataGapError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TemplateInstance {
  std::string label;  // IIa, IIb, IV, IIIa, IIIb
  ZPoly poly;         // integer polynomial in T, constant term 1, degree 4*dim
  int dim = 0;        // predicted subspace dimension = degree/4
  std::string source; // orbit / pair the instance came from
};

namespace detail {

inline ZPoly zt(std::initializer_list<long> cs) {
  ZPoly r;
  for (long c : cs) r.push_back(c);
  z_trim(r);
  return r;
}

// prod over roots x_i of monic c of (A + x_i B)
inline ZPoly orbit_product_linear(const ZPoly& c, const ZPoly& A, const ZPoly& B) {
  int d = z_deg(c);
  std::vector<ZPoly> apow(d + 1), bpow(d + 1);
  apow[0] = {1};
  bpow[0] = {1};
  for (int i = 1; i <= d; ++i) {
    apow[i] = z_mul(apow[i - 1], A);
    bpow[i] = z_mul(bpow[i - 1], B);
  }
  ZPoly acc;
  for (int k = 0; k <= d; ++k) {
    if (c[k] == 0) continue;
    ZPoly term = z_mul(apow[k], bpow[d - k]);
    mpz_class coef = c[k];
    if ((d - k) % 2 == 1) coef = -coef;
    acc = z_add(acc, z_scale(term, coef));
  }
  return acc;
}

// arithmetic in the quadratic order Z[w], w^2 = w + m where m = (disc-1)/4
struct QuadElt {
  mpz_class a, b; // a + b*w
};

inline QuadElt qi_add(const QuadElt& x, const QuadElt& y) { return {x.a + y.a, x.b + y.b}; }
inline QuadElt qi_mul(const QuadElt& x, const QuadElt& y, const mpz_class& m) {
  return {x.a * y.a + x.b * y.b * m, x.a * y.b + x.b * y.a + x.b * y.b};
}
inline QuadElt qi_conj(const QuadElt& x) { return {x.a + x.b, -x.b}; } // w -> 1 - w

using QuadPoly = std::vector<QuadElt>; // low-to-high

inline QuadPoly qp_mul(const QuadPoly& x, const QuadPoly& y, const mpz_class& m) {
  QuadPoly r(x.size() + y.size() - 1, QuadElt{0, 0});
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      r[i + j] = qi_add(r[i + j], qi_mul(x[i], y[j], m));
  return r;
}

// the cubic-family degree-4 block for one member with eigenvalue g (and
// conjugate g'), multiplied over the conjugate pair into an integer
// polynomial of degree 8
inline ZPoly pair_product(const QuadElt& g, const mpz_class& m, long ell, bool variant_b) {
  QuadElt gc = qi_conj(g);
  mpz_class l = ell, l3 = l * l * l, l6 = l3 * l3;
  auto member = [&](const QuadElt& gamma) {
    QuadElt gamma_c = qi_conj(gamma);
    QuadPoly linear, cubic;
    if (!variant_b) {
      linear = {{1, 0}, {-l3, 0}};                      // 1 - l^3 T
      cubic = {{1, 0},                                  // 1
               {-gamma.a, -gamma.b},                    // -gamma T
               {l * gamma_c.a, l * gamma_c.b},          // +l gamma' T^2
               {-l3, 0}};                               // -l^3 T^3
    } else {
      linear = {{1, 0}, {-1, 0}};                       // 1 - T
      cubic = {{1, 0},
               {-l * gamma.a, -l * gamma.b},            // -l gamma T
               {l3 * gamma_c.a, l3 * gamma_c.b},        // +l^3 gamma' T^2
               {-l6, 0}};                               // -l^6 T^3
    }
    return qp_mul(linear, cubic, m);
  };
  QuadPoly prod = qp_mul(member(g), member(gc), m);
  ZPoly out(prod.size());
  for (std::size_t i = 0; i < prod.size(); ++i) {
    if (prod[i].b != 0)
      throw std::logic_error("conjugate-pair product must have integer coefficients");
    out[i] = prod[i].a;
  }
  z_trim(out);
  return out;
}

} // namespace detail

// Instantiate every applicable template at level p and prime ell from the
// given eigenform data.  With strict=true a missing eigenvalue raises
// DataGapError naming the orbit; with strict=false the affected instances are
// skipped and a description appended to *gaps.
inline std::vector<TemplateInstance> eisenstein_templates(
    int p, int ell, const FormsData& data, bool strict = true,
    std::vector<std::string>* gaps = nullptr) {
  if (!is_prime_int(p)) throw std::invalid_argument("template instantiation needs prime level");
  std::vector<TemplateInstance> out;
  long l = ell;
  long l2 = l * l, l3 = l2 * l, l5 = l3 * l2;
  auto note_gap = [&](const std::string& msg) {
    if (strict) throw DataGapError(msg);
    if (gaps) gaps->push_back(msg);
  };
  int idx2 = 0, idx4 = 0;
  for (const auto& o : data.gl2) {
    if (o.level != p) continue;
    int idx = (o.weight == 2) ? idx2++ : idx4++;
    if (o.weight == 4 && o.eps != -1) continue;
    std::ostringstream src;
    src << "gl2:" << p << ".w" << o.weight << "." << idx << " (dim " << o.dim << ")";
    const ZPoly* cp = o.charpoly_at(ell);
    if (!cp) {
      note_gap("orbit " + src.str() + " has no T_" + std::to_string(ell) + " data");
      continue;
    }
    using detail::zt;
    if (o.weight == 2) {
      // IIa: (1-l^2 T)(1-l^3 T) * (1 - alpha T + l T^2)
      ZPoly E = z_mul(zt({1, -l2}), zt({1, -l3}));
      ZPoly iia = detail::orbit_product_linear(*cp, z_mul(E, zt({1, 0, l})),
                                               z_mul(E, zt({0, -1})));
      // IIb: (1-T)(1-l T) * (1 - l^2 alpha T + l^5 T^2)
      ZPoly F = z_mul(zt({1, -1}), zt({1, -l}));
      ZPoly iib = detail::orbit_product_linear(*cp, z_mul(F, zt({1, 0, l5})),
                                               z_mul(F, zt({0, -l2})));
      out.push_back({"IIa", std::move(iia), o.dim, src.str()});
      out.push_back({"IIb", std::move(iib), o.dim, src.str()});
    } else {
      // IV: (1-l T)(1-l^2 T) * (1 - beta T + l^3 T^2)
      ZPoly G = z_mul(zt({1, -l}), zt({1, -l2}));
      ZPoly iv = detail::orbit_product_linear(*cp, z_mul(G, zt({1, 0, l3})),
                                              z_mul(G, zt({0, -1})));
      out.push_back({"IV", std::move(iv), o.dim, src.str()});
    }
  }
  int idx3 = 0;
  for (const auto& g : data.gl3) {
    if (g.level != p) continue;
    std::ostringstream src;
    src << "gl3:" << p << "." << idx3++ << " (dim " << g.dim << ")";
    if (g.dim != 2)
      throw std::logic_error("GL(3) pair instantiation implemented for dim 2 only");
    const auto* ev = g.eigenvalue_at(ell);
    if (g.disc == 0 || !ev) {
      note_gap("pair " + src.str() + " has no T(" + std::to_string(ell) + ",1) data");
      continue;
    }
    mpz_class m = (mpz_class(g.disc) - 1) / 4;
    detail::QuadElt gamma{ev->first, ev->second};
    out.push_back({"IIIa", detail::pair_product(gamma, m, l, false), g.dim, src.str()});
    out.push_back({"IIIb", detail::pair_product(gamma, m, l, true), g.dim, src.str()});
  }
  for (const auto& t : out) {
    if (t.poly.empty() || t.poly[0] != 1)
      throw std::logic_error("template must have constant term 1");
    if (z_deg(t.poly) != 4 * t.dim)
      throw std::logic_error("template degree must be 4*dim");
  }
  return out;
}

// The degree-4 packet encoding 1 - a1 T + a2 l T^2 - a3 l^3 T^3 + l^6 T^4.
// Extracts (a1, a2, a3) from a degree-4 polynomial with the right outer
// coefficients; returns false if the shape does not match.
inline bool packet_from_quartic(const ZPoly& f, long ell, mpz_class out[3]) {
  if (z_deg(f) != 4 || f[0] != 1) return false;
  mpz_class l = ell, l3 = l * l * l, l6 = l3 * l3;
  if (f[4] != l6) return false;
  if (f[2] % l != 0 || f[3] % l3 != 0) return false;
  out[0] = -f[1];
  out[1] = f[2] / l;
  out[2] = -f[3] / l3;
  return true;
}

// build the quartic from a packet (inverse of packet_from_quartic)
inline ZPoly quartic_from_packet(const mpz_class& a1, const mpz_class& a2,
                                 const mpz_class& a3, long ell) {
  mpz_class l = ell, l3 = l * l * l, l6 = l3 * l3;
  return ZPoly{1, -a1, a2 * l, -a3 * l3, l6};
}

// the duality transform P(T) -> l^(6d) T^(4d) P(1/(l^3 T)) exchanging the
// IIa and IIb instances of one orbit (and reversing packets)
inline ZPoly dual_reverse(const ZPoly& f, long ell) {
  int n = z_deg(f);
  assert(n % 4 == 0);
  int d = n / 4;
  mpz_class l = ell;
  mpz_class l3 = l * l * l;
  ZPoly out(n + 1);
  // coefficient of T^k: f_(n-k) * l^(3k - 6d), exact by duality
  for (int k = 0; k <= n; ++k) {
    mpz_class num = f[n - k];
    int e = 3 * k - 6 * d;
    if (e >= 0) {
      mpz_class sc = 1;
      for (int i = 0; i < e; ++i) sc *= l;
      out[k] = num * sc;
    } else {
      mpz_class sc = 1;
      for (int i = 0; i < -e; ++i) sc *= l;
      assert(num % sc == 0);
      out[k] = num / sc;
    }
  }
  z_trim(out);
  return out;
}

} // namespace sl4cohom
