#pragma once
// Smith normal form over Z for sparse integer matrices.  Strategy: eliminate
// with +-1 pivots in sparse form first (each contributes a trivial divisor and
// keeps all arithmetic integral), then run the classical dense algorithm with
// arbitrary-precision entries on the small remaining core.

#include "sl4cohom/smallmat.hpp"
#include "sl4cohom/sparse.hpp"

#include <gmpxx.h>

#include <map>
#include <stdexcept>

namespace sl4cohom {

struct SmithResult {
  int rank = 0;
  std::vector<mpz_class> divisors; // the nontrivial elementary divisors (> 1), in chain order
};

struct SmithBudgetExceeded : std::runtime_error {
  SmithBudgetExceeded() : std::runtime_error("smith normal form exceeded its size budget") {}
};

namespace detail {

// dense SNF with gmp entries; returns full diagonal (including 1s and 0s trimmed)
inline std::vector<mpz_class> dense_smith(std::vector<std::vector<mpz_class>> a,
                                          std::size_t max_bits) {
  std::vector<mpz_class> diag;
  std::size_t top = 0;
  int m = (int)a.size();
  int n = m ? (int)a[0].size() : 0;
  while ((int)top < m && (int)top < n) {
    // locate minimal nonzero entry in the remaining block
    int pr = -1, pc = -1;
    for (int i = (int)top; i < m; ++i)
      for (int j = (int)top; j < n; ++j)
        if (a[i][j] != 0 &&
            (pr < 0 || cmp(abs(a[i][j]), abs(a[pr][pc])) < 0)) {
          pr = i;
          pc = j;
        }
    if (pr < 0) break; // block is zero
    std::swap(a[pr], a[(int)top]);
    for (int i = (int)top; i < m; ++i) std::swap(a[i][pc], a[i][(int)top]);
    bool clean = false;
    while (!clean) {
      clean = true;
      // clear the pivot column
      for (int i = (int)top + 1; i < m; ++i) {
        if (a[i][top] == 0) continue;
        mpz_class q = a[i][top] / a[top][top];
        for (int j = (int)top; j < n; ++j) a[i][j] -= q * a[top][j];
        if (a[i][top] != 0) { // remainder smaller than pivot: swap up and restart
          std::swap(a[i], a[(int)top]);
          clean = false;
        }
      }
      if (!clean) continue;
      // clear the pivot row
      for (int j = (int)top + 1; j < n; ++j) {
        if (a[top][j] == 0) continue;
        mpz_class q = a[top][j] / a[top][top];
        for (int i = (int)top; i < m; ++i) a[i][j] -= q * a[i][top];
        if (a[top][j] != 0) {
          for (int i = (int)top; i < m; ++i) std::swap(a[i][j], a[i][(int)top]);
          clean = false;
        }
      }
      if (!clean) continue;
      // pivot must divide the rest of the block; if not, fold the offender in
      for (int i = (int)top + 1; i < m && clean; ++i)
        for (int j = (int)top + 1; j < n && clean; ++j)
          if (a[i][j] % a[top][top] != 0) {
            for (int jj = (int)top; jj < n; ++jj) a[top][jj] += a[i][jj];
            clean = false;
          }
      for (const auto& row : a)
        for (const auto& x : row)
          if (mpz_sizeinbase(x.get_mpz_t(), 2) > max_bits) throw SmithBudgetExceeded();
    }
    diag.push_back(abs(a[top][top]));
    ++top;
  }
  return diag;
}

} // namespace detail

inline SmithResult smith_normal_form(const SparseIntMat& mat, std::size_t max_bits = 4096,
                                     std::size_t core_limit = 600) {
  // sparse phase: rows as maps, eliminate +-1 pivots
  std::map<int, std::map<int, i64>> rows;  // row -> col -> val
  std::map<int, std::map<int, char>> cols; // col -> set of rows
  {
    auto rr = mat.to_rows();
    for (int i = 0; i < (int)rr.size(); ++i)
      for (const auto& [c, v] : rr[i]) {
        rows[i][c] = v;
        cols[c][i] = 1;
      }
  }
  int unit_pivots = 0;
  const i64 kEntryCap = INT64_C(1) << 40;
  while (true) {
    // best +-1 pivot by fill estimate (nnz_row - 1) * (nnz_col - 1)
    long long best = -1;
    int br = -1, bc = -1;
    for (const auto& [r, row] : rows)
      for (const auto& [c, v] : row) {
        if (v != 1 && v != -1) continue;
        long long score = (long long)(row.size() - 1) * ((long long)cols[c].size() - 1);
        if (best < 0 || score < best) {
          best = score;
          br = r;
          bc = c;
        }
        if (best == 0) break;
      }
    if (br < 0) break;
    // eliminate column bc using row br
    i64 pv = rows[br][bc];
    std::map<int, i64> prow = rows[br];
    std::vector<int> touched;
    for (const auto& [r2, flag] : cols[bc])
      if (r2 != br) touched.push_back(r2);
    for (int r2 : touched) {
      i64 factor = rows[r2][bc] * pv; // pv in {1,-1}: factor = entry / pivot
      for (const auto& [c2, v2] : prow) {
        i64& slot = rows[r2][c2];
        slot -= factor * v2;
        if (std::abs(slot) > kEntryCap) throw SmithBudgetExceeded();
        if (slot == 0) {
          rows[r2].erase(c2);
          cols[c2].erase(r2);
        } else {
          cols[c2][r2] = 1;
        }
      }
      if (rows[r2].empty()) rows.erase(r2);
    }
    // retire pivot row and column
    for (const auto& [c2, v2] : prow) cols[c2].erase(br);
    rows.erase(br);
    cols.erase(bc);
    ++unit_pivots;
  }
  // dense core
  std::vector<int> row_ids, col_ids;
  for (const auto& [r, row] : rows)
    if (!row.empty()) row_ids.push_back(r);
  {
    std::map<int, char> live_cols;
    for (const auto& [r, row] : rows)
      for (const auto& [c, v] : row) live_cols[c] = 1;
    for (const auto& [c, flag] : live_cols) col_ids.push_back(c);
  }
  if (row_ids.size() > core_limit || col_ids.size() > core_limit) throw SmithBudgetExceeded();
  std::vector<std::vector<mpz_class>> core(row_ids.size(),
                                           std::vector<mpz_class>(col_ids.size(), 0));
  std::map<int, int> col_pos;
  for (int j = 0; j < (int)col_ids.size(); ++j) col_pos[col_ids[j]] = j;
  for (int i = 0; i < (int)row_ids.size(); ++i)
    for (const auto& [c, v] : rows[row_ids[i]]) core[i][col_pos[c]] = v;
  std::vector<mpz_class> diag = detail::dense_smith(std::move(core), max_bits);
  // assemble: unit pivots contribute 1s; enforce the divisibility chain
  std::vector<mpz_class> all(unit_pivots, 1);
  for (auto& x : diag) all.push_back(x);
  for (std::size_t i = 0; i + 1 < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (all[j] % all[i] != 0) {
        mpz_class g = gcd(all[i], all[j]);
        mpz_class l = all[i] / g * all[j];
        all[i] = g;
        all[j] = l;
      }
  std::sort(all.begin(), all.end());
  SmithResult res;
  res.rank = (int)all.size();
  for (auto& x : all)
    if (x > 1) res.divisors.push_back(x);
  return res;
}

} // namespace sl4cohom
