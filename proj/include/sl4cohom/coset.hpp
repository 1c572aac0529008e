#pragma once
// The coset space of the level subgroup inside SL(4,Z): matrices whose last
// row is congruent to (0,0,0,*) mod N, acting from the left.  Right cosets
// are classified by the last row mod N up to unit scaling, i.e. by points of
// P^3(Z/N).  Provides dense integer ids, the right SL(4,Z)-action, and
// integral lifts used by Hecke-operator plumbing.

#include "sl4cohom/smallmat.hpp"

#include <cstdint>
#include <unordered_map>

namespace sl4cohom {

class CosetSpace {
 public:
  explicit CosetSpace(int n) : n_(n) {
    assert(n >= 1 && n <= 255);
    inv_.assign(n_, 0);
    for (int a = 1; a < n_; ++a)
      if (std::gcd(a, n_) == 1)
        for (int b = 1; b < n_; ++b)
          if (a * b % n_ == 1) { inv_[a] = b; break; }
    units_.clear();
    if (n_ == 1) units_.push_back(0);
    for (int a = 1; a < n_; ++a)
      if (inv_[a]) units_.push_back(a);
    // enumerate canonical rows in lexicographic order
    std::array<int, 4> r{};
    for (r[0] = 0; r[0] < n_; ++r[0])
      for (r[1] = 0; r[1] < n_; ++r[1])
        for (r[2] = 0; r[2] < n_; ++r[2])
          for (r[3] = 0; r[3] < n_; ++r[3]) {
            if (n_ > 1) {
              int g = std::gcd(std::gcd(r[0], r[1]), std::gcd(r[2], std::gcd(r[3], n_)));
              if (g != 1) continue;
            }
            if (canonicalize(r) != r) continue;
            std::uint32_t key = pack(r);
            index_.emplace(key, (int)points_.size());
            points_.push_back(r);
          }
    base_ = index(canonicalize({0, 0, 0, n_ == 1 ? 0 : 1}));
  }

  int n() const { return n_; }
  int size() const { return (int)points_.size(); }
  int base() const { return base_; }
  const std::array<int, 4>& row(int id) const { return points_[id]; }

  // canonical representative of the unit-scaling class of an arbitrary row
  std::array<int, 4> canonicalize(std::array<int, 4> r) const {
    for (auto& x : r) {
      x %= n_;
      if (x < 0) x += n_;
    }
    if (n_ == 1) return r;
    // scale at the last unit entry
    for (int i = 3; i >= 0; --i)
      if (inv_[r[i] % n_] || r[i] == 1) {
        int u = (r[i] == 1) ? 1 : inv_[r[i]];
        if (u != 1)
          for (auto& x : r) x = x * u % n_;
        return r;
      }
    // no unit entry (composite N only): lexicographically least unit multiple
    std::array<int, 4> best = r;
    for (int u : units_) {
      std::array<int, 4> s;
      for (int i = 0; i < 4; ++i) s[i] = r[i] * u % n_;
      if (s < best) best = s;
    }
    return best;
  }

  int index(const std::array<int, 4>& canonical_row) const {
    auto it = index_.find(pack(canonical_row));
    assert(it != index_.end());
    return it->second;
  }

  int canon_index(const std::array<int, 4>& any_row) const {
    return index(canonicalize(any_row));
  }

  // right action: the coset of g0 maps to the coset of g0 * g
  int act(int id, const Mat4& g) const {
    const auto& r = points_[id];
    std::array<int, 4> s{};
    for (int j = 0; j < 4; ++j) {
      long long acc = 0;
      for (int i = 0; i < 4; ++i) acc += (long long)r[i] * g[i][j];
      s[j] = (int)(acc % n_);
      if (s[j] < 0) s[j] += n_;
    }
    return canon_index(s);
  }

  // some element of SL(4,Z) whose coset corresponds to the point
  Mat4 lift(int id) const {
    Vec4 v{};
    for (int i = 0; i < 4; ++i) v[i] = points_[id][i];
    if (vec_is_zero(v)) v = {0, 0, 0, 1}; // N = 1
    i64 g = vec_content(v);
    if (g > 1)
      for (auto& x : v) x /= g; // unit scaling mod N: same projective point
    return complete_to_sl4(v);
  }

 private:
  static std::uint32_t pack(const std::array<int, 4>& r) {
    return (std::uint32_t)r[0] | ((std::uint32_t)r[1] << 8) | ((std::uint32_t)r[2] << 16) |
           ((std::uint32_t)r[3] << 24);
  }
  int n_;
  std::vector<std::array<int, 4>> points_;
  std::unordered_map<std::uint32_t, int> index_;
  std::vector<int> inv_;
  std::vector<int> units_;
  int base_ = 0;
};

} // namespace sl4cohom
