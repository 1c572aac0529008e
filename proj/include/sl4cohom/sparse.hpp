#pragma once
// Sparse exact linear algebra over F_p: triplet matrices, an incremental
// row-echelon structure (kept rows have unit pivots and are never modified
// after insertion), ranks, kernels, and tracked reductions used to express
// vectors in terms of tagged echelon rows.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <queue>
#include <unordered_map>
#include <vector>

namespace sl4cohom {

using SparseRow = std::vector<std::pair<std::int32_t, std::int64_t>>; // sorted by col, val in [1,p)

struct SparseIntMat {
  int rows = 0, cols = 0;
  std::vector<std::int32_t> ri, ci;
  std::vector<std::int64_t> v;
  void add(int r, int c, std::int64_t val) {
    if (val == 0) return;
    ri.push_back(r);
    ci.push_back(c);
    v.push_back(val);
  }
  std::size_t nnz() const { return v.size(); }
  // rows of the matrix as sparse rows (duplicates within an entry list summed)
  std::vector<SparseRow> to_rows() const {
    std::vector<SparseRow> out(rows);
    for (std::size_t k = 0; k < v.size(); ++k) out[ri[k]].push_back({ci[k], v[k]});
    for (auto& r : out) {
      std::sort(r.begin(), r.end());
      SparseRow merged;
      for (auto& [c, val] : r) {
        if (!merged.empty() && merged.back().first == c)
          merged.back().second += val;
        else
          merged.push_back({c, val});
      }
      merged.erase(std::remove_if(merged.begin(), merged.end(),
                                  [](const auto& e) { return e.second == 0; }),
                   merged.end());
      r = std::move(merged);
    }
    return out;
  }
  std::vector<SparseRow> to_cols() const {
    SparseIntMat t;
    t.rows = cols;
    t.cols = rows;
    t.ri = ci;
    t.ci = ri;
    t.v = v;
    return t.to_rows();
  }
};

inline std::int64_t mod_pos(std::int64_t x, std::int64_t p) {
  x %= p;
  return x < 0 ? x + p : x;
}

inline std::int64_t mod_pow(std::int64_t b, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1;
  b = mod_pos(b, p);
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline std::int64_t mod_inv(std::int64_t a, std::int64_t p) { return mod_pow(a, p - 2, p); }

class FpEchelon {
 public:
  FpEchelon(std::int64_t p, int ncols) : p_(p), ncols_(ncols), pivot_(ncols, -1) {}

  std::int64_t prime() const { return p_; }
  int rank() const { return (int)rows_.size(); }

  // Reduce a row against the echelon.  If `used` is given, records
  // (tag, coefficient) for every echelon row applied: on return,
  // input = result + sum coefficient * row(tag)  (mod p).
  SparseRow reduce(SparseRow r, std::vector<std::pair<int, std::int64_t>>* used = nullptr) const {
    normalize(r);
    // scan left to right; stored rows have support >= their pivot column, so
    // entries before the current position are final
    std::size_t i = 0;
    while (i < r.size()) {
      int idx = pivot_[r[i].first];
      if (idx < 0) {
        ++i;
        continue;
      }
      std::int64_t c = r[i].second;
      if (used) used->push_back({tags_[idx], c});
      r = axpy(r, rows_[idx], p_ - c);
    }
    return r;
  }

  // Insert after reduction; returns true if the row was independent.
  bool insert(SparseRow r, int tag = -1) {
    r = reduce(std::move(r));
    if (r.empty()) return false;
    std::int64_t inv = mod_inv(r.front().second, p_);
    if (inv != 1)
      for (auto& [c, val] : r) val = val * inv % p_;
    pivot_[r.front().first] = (int)rows_.size();
    rows_.push_back(std::move(r));
    tags_.push_back(tag);
    return true;
  }

  bool is_pivot_col(std::int32_t c) const { return pivot_[c] >= 0; }
  const std::vector<SparseRow>& rows() const { return rows_; }
  const std::vector<int>& tags() const { return tags_; }
  std::size_t stored_entries() const {
    std::size_t s = 0;
    for (const auto& r : rows_) s += r.size();
    return s;
  }

  // r1 + coef * r2 over F_p, sparse merge
  SparseRow axpy(const SparseRow& r1, const SparseRow& r2, std::int64_t coef) const {
    SparseRow out;
    out.reserve(r1.size() + r2.size());
    std::size_t i = 0, j = 0;
    while (i < r1.size() || j < r2.size()) {
      if (j == r2.size() || (i < r1.size() && r1[i].first < r2[j].first)) {
        out.push_back(r1[i++]);
      } else if (i == r1.size() || r2[j].first < r1[i].first) {
        std::int64_t val = r2[j].second * coef % p_;
        if (val) out.push_back({r2[j].first, val});
        ++j;
      } else {
        std::int64_t val = (r1[i].second + r2[j].second * coef) % p_;
        if (val) out.push_back({r1[i].first, val});
        ++i;
        ++j;
      }
    }
    return out;
  }

 private:
  void normalize(SparseRow& r) const {
    for (auto& [c, val] : r) val = mod_pos(val, p_);
    r.erase(std::remove_if(r.begin(), r.end(), [](const auto& e) { return e.second == 0; }),
            r.end());
    std::sort(r.begin(), r.end());
    SparseRow merged;
    for (auto& [c, val] : r) {
      if (!merged.empty() && merged.back().first == c)
        merged.back().second = (merged.back().second + val) % p_;
      else
        merged.push_back({c, val});
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto& e) { return e.second == 0; }),
                 merged.end());
    r = std::move(merged);
  }

  std::int64_t p_;
  int ncols_;
  std::vector<int> pivot_; // col -> stored row index, -1 if none
  std::vector<SparseRow> rows_;
  std::vector<int> tags_;
};

// rank over F_p with two standard fill-in heuristics: columns are relabeled in
// order of increasing global count (rare columns pivot early and stay sparse),
// and rows are consumed shortest-first from a priority queue, re-enqueueing a
// reduced row whenever it has grown past the current shortest candidate.
inline int rank_mod_p(std::vector<SparseRow> rows, int ncols, std::int64_t p) {
  std::vector<int> count(ncols, 0);
  for (const auto& r : rows)
    for (const auto& [c, v] : r) count[c]++;
  std::vector<int> order(ncols);
  for (int c = 0; c < ncols; ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return count[a] < count[b]; });
  std::vector<std::int32_t> newcol(ncols);
  for (int pos = 0; pos < ncols; ++pos) newcol[order[pos]] = pos;
  for (auto& r : rows) {
    for (auto& [c, v] : r) c = newcol[c];
    std::sort(r.begin(), r.end());
  }
  using Item = std::pair<std::size_t, int>; // (length, arena index), min-heap
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int i = 0; i < (int)rows.size(); ++i)
    if (!rows[i].empty()) pq.push({rows[i].size(), i});
  FpEchelon ech(p, ncols);
  while (!pq.empty()) {
    auto [len, idx] = pq.top();
    pq.pop();
    SparseRow r = ech.reduce(std::move(rows[idx]));
    if (r.empty()) {
      rows[idx].clear();
      continue;
    }
    if (pq.empty() || r.size() <= pq.top().first) {
      ech.insert(std::move(r));
      rows[idx].clear();
    } else {
      std::size_t nl = r.size();
      rows[idx] = std::move(r);
      pq.push({nl, idx});
    }
  }
  return ech.rank();
}

inline int rank_mod_p(const SparseIntMat& m, std::int64_t p) {
  // echelonize inside the smaller-dimension space: many short vectors reduce
  // against each other far faster than few long ones
  if (m.rows <= m.cols) return rank_mod_p(m.to_cols(), m.rows, p);
  return rank_mod_p(m.to_rows(), m.cols, p);
}

// kernel basis of the linear map with matrix m (rows = codomain, cols =
// domain): all x with m x = 0.  Echelonize the equation rows, then one kernel
// vector per free column.  Returns sparse columns over F_p.
inline std::vector<SparseRow> kernel_mod_p(const SparseIntMat& m, std::int64_t p) {
  FpEchelon ech(p, m.cols);
  for (auto& r : m.to_rows()) ech.insert(std::move(r));
  // echelon rows: pivot col -> row; back-substitution per free column
  std::vector<char> is_piv(m.cols, 0);
  std::vector<int> piv_row(m.cols, -1);
  const auto& rows = ech.rows();
  for (int i = 0; i < (int)rows.size(); ++i) {
    is_piv[rows[i].front().first] = 1;
    piv_row[rows[i].front().first] = i;
  }
  // order pivot columns descending for back-substitution
  std::vector<int> piv_cols;
  for (int c = m.cols - 1; c >= 0; --c)
    if (is_piv[c]) piv_cols.push_back(c);
  std::vector<SparseRow> kernel;
  for (int f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    std::unordered_map<int, std::int64_t> x;
    x[f] = 1;
    for (int c : piv_cols) {
      if (c > f) continue; // echelon rows have support in cols >= pivot only
      const SparseRow& row = rows[piv_row[c]];
      std::int64_t s = 0;
      for (const auto& [col, val] : row)
        if (col != c) {
          auto it = x.find(col);
          if (it != x.end()) s = (s + val * it->second) % p;
        }
      if (s) x[c] = p - s;
    }
    SparseRow col;
    for (const auto& [cc, val] : x) col.push_back({cc, val});
    std::sort(col.begin(), col.end());
    kernel.push_back(std::move(col));
  }
  return kernel;
}

} // namespace sl4cohom
