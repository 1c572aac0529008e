#pragma once
// Simultaneous generalized eigenspace decomposition of a family of commuting
// operators on a small F_p vector space.  Each operator in turn refines the
// current blocks: on a block, factor the restricted characteristic polynomial
// and split along kernels of f(T)^mult.  Column-vector convention: an operator
// matrix m sends x to m x; basis vectors are stored as rows of an FpMat.

#include "sl4cohom/fppoly.hpp"

#include <optional>

namespace sl4cohom {

struct EigenBlock {
  int dim = 0;
  // one entry per operator: the eigenvalue if the restricted factor is linear
  std::vector<std::optional<std::int64_t>> eigs;
  // per operator, the monic irreducible factor cut out on this block
  std::vector<FpPoly> factors;
  FpMat basis; // rows = basis vectors in ambient coordinates
  bool rational() const {
    for (const auto& e : eigs)
      if (!e) return false;
    return true;
  }
};

inline FpMat fp_mat_transpose(const FpMat& a) {
  if (a.empty()) return {};
  FpMat r(a[0].size(), std::vector<std::int64_t>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j];
  return r;
}

// Solve y = c * b for c, where the rows of b are independent and every row of
// y lies in their span.  (Row convention: each row of y is a combination of
// rows of b.)
inline FpMat fp_express_rows(const FpMat& y, const FpMat& b, std::int64_t p) {
  int k = (int)b.size();
  int n = k ? (int)b[0].size() : 0;
  int m = (int)y.size();
  // eliminate on [b^T | y^T]: columns of the augmented system
  FpMat aug = fp_mat_transpose(b); // n x k
  FpMat yt = fp_mat_transpose(y);  // n x m
  for (int i = 0; i < n; ++i) aug[i].insert(aug[i].end(), yt[i].begin(), yt[i].end());
  std::vector<int> pivot_row_of_col(k, -1);
  int rank = 0;
  for (int col = 0; col < k && rank < n; ++col) {
    int piv = -1;
    for (int i = rank; i < n; ++i)
      if (aug[i][col]) {
        piv = i;
        break;
      }
    assert(piv >= 0 && "basis rows must be independent");
    std::swap(aug[piv], aug[rank]);
    std::int64_t inv = mod_inv(aug[rank][col], p);
    for (int j = col; j < k + m; ++j) aug[rank][j] = aug[rank][j] * inv % p;
    for (int i = 0; i < n; ++i) {
      if (i == rank || !aug[i][col]) continue;
      std::int64_t f = aug[i][col];
      for (int j = col; j < k + m; ++j) aug[i][j] = mod_pos(aug[i][j] - f * aug[rank][j], p);
    }
    pivot_row_of_col[col] = rank;
    ++rank;
  }
  assert(rank == k);
  for (int i = rank; i < n; ++i)
    for (int j = k; j < k + m; ++j) assert(aug[i][j] == 0 && "row outside basis span");
  FpMat c(m, std::vector<std::int64_t>(k, 0));
  for (int col = 0; col < k; ++col)
    for (int j = 0; j < m; ++j) c[j][col] = aug[pivot_row_of_col[col]][k + j];
  return c;
}

// matrix of op restricted to span(basis rows), column-vector convention
inline FpMat fp_restrict_op(const FpMat& op, const FpMat& basis, std::int64_t p) {
  // images of basis vectors: op * basis_i  (basis rows are column vectors)
  FpMat images = fp_mat_mul(basis, fp_mat_transpose(op), p); // row i = (op b_i)^T
  FpMat c = fp_express_rows(images, basis, p);               // images = c * basis
  // op b_i = sum_j c[i][j] b_j, so column i of the restricted matrix is c[i][*]
  return fp_mat_transpose(c);
}

inline std::vector<EigenBlock> simultaneous_eigensplit(const std::vector<FpMat>& ops,
                                                       std::int64_t p) {
  if (ops.empty()) return {};
  int n = (int)ops[0].size();
  std::vector<EigenBlock> blocks;
  {
    EigenBlock whole;
    whole.dim = n;
    whole.basis.assign(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i) whole.basis[i][i] = 1;
    blocks.push_back(std::move(whole));
  }
  if (n == 0) return {};
  for (const auto& op : ops) {
    std::vector<EigenBlock> next;
    for (auto& blk : blocks) {
      FpMat r = fp_restrict_op(op, blk.basis, p);
      FpPoly cp = fp_charpoly(r, p);
      auto facs = fp_factor(cp, p);
      int covered = 0;
      for (const auto& fac : facs) {
        int d = fp_deg(fac.poly) * fac.mult;
        FpMat power = fp_poly_at_mat(fac.poly, r, p);
        FpMat acc = power;
        for (int t = 1; t < fac.mult; ++t) acc = fp_mat_mul(acc, power, p);
        FpMat ker = fp_mat_kernel(acc, p); // coordinate vectors (rows)
        assert((int)ker.size() == d && "generalized eigenspace dimension");
        EigenBlock sub;
        sub.dim = d;
        sub.eigs = blk.eigs;
        sub.factors = blk.factors;
        if (fp_deg(fac.poly) == 1)
          sub.eigs.push_back(mod_pos(-fac.poly[0], p));
        else
          sub.eigs.push_back(std::nullopt);
        sub.factors.push_back(fac.poly);
        sub.basis = fp_mat_mul(ker, blk.basis, p); // back to ambient coordinates
        covered += d;
        next.push_back(std::move(sub));
      }
      assert(covered == blk.dim);
    }
    blocks = std::move(next);
  }
  return blocks;
}

} // namespace sl4cohom
