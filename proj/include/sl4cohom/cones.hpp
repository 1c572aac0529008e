#pragma once
// Facet enumeration for a polyhedral cone given by finitely many integer
// generator vectors in Z^d.  Works for cones of any rank r <= d: facets are
// the faces of dimension r-1.  The returned normal is a primitive integer
// vector h with h.g = 0 on the facet's generators and h.g > 0 on all others
// (dot products taken in the given coordinates); h is well defined up to the
// orthogonal complement of the generator span, which does not affect these
// sign patterns.

#include "sl4cohom/smallmat.hpp"

#include <functional>
#include <map>
#include <set>

namespace sl4cohom {

struct ConeFacet {
  std::vector<int> gens;     // sorted indices of generators lying on the facet
  std::vector<i64> normal;   // primitive; >= 0 on all generators
};

namespace detail {

inline void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  if (k > n) return;
  while (true) {
    f(c);
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

} // namespace detail

inline std::vector<ConeFacet> cone_facets(const IMat& gens) {
  int n = imat_rows(gens), d = imat_cols(gens);
  int r = imat_rank(gens);
  assert(r >= 2);
  std::map<std::vector<int>, std::vector<i64>> facets; // incident set -> normal
  detail::for_each_combination(n, r - 1, [&](const std::vector<int>& idx) {
    IMat sub;
    for (int i : idx) sub.push_back(gens[i]);
    if (imat_rank(sub) != r - 1) return;
    IMat ns = imat_nullspace(sub); // dimension d - (r-1); quotient by span^perp is a line
    std::vector<i64> h;
    std::vector<i64> dots(n, 0);
    for (const auto& cand : ns) {
      bool nonzero = false;
      for (int i = 0; i < n; ++i) {
        i128 s = 0;
        for (int j = 0; j < d; ++j) s += (i128)cand[j] * gens[i][j];
        assert(s <= INT64_MAX && s >= INT64_MIN);
        dots[i] = (i64)s;
        nonzero |= (dots[i] != 0);
      }
      if (nonzero) { h = cand; break; }
    }
    if (h.empty()) return; // hyperplane contains the whole cone: not a facet
    int pos = 0, neg = 0;
    for (i64 s : dots) {
      pos += (s > 0);
      neg += (s < 0);
    }
    if (pos > 0 && neg > 0) return; // not supporting
    if (neg > 0)
      for (auto& x : h) x = -x;
    std::vector<int> incident;
    for (int i = 0; i < n; ++i)
      if (dots[i] == 0) incident.push_back(i);
    // primitive normal
    i64 g = 0;
    for (i64 x : h) g = std::gcd(g, std::abs(x));
    if (g > 1)
      for (auto& x : h) x /= g;
    facets.emplace(std::move(incident), std::move(h));
  });
  std::vector<ConeFacet> out;
  for (auto& [inc, h] : facets) out.push_back({inc, h});
  return out;
}

} // namespace sl4cohom
