#pragma once
// The equivariant cochain complex computing H*(Gamma_0(N)) from the cell
// system and the coset space P^3(Z/N).  Basis elements in degree k are pairs
// (cell class of degree k, stabilizer-orbit of a coset point); orbits with an
// orientation-reversing point stabilizer are self-negating and excluded.
// The differential d^k: C^k -> C^{k+1} sends a cell to its spanning facets
// with incidence signs, transporting coset points along the facet's
// identification with its representative and twisting by the orientation
// character.  Away from the primes dividing stabilizer orders (2, 3, 5) this
// computes the cohomology of the level subgroup.

#include "sl4cohom/cells.hpp"
#include "sl4cohom/coset.hpp"
#include "sl4cohom/sparse.hpp"

namespace sl4cohom {

struct CellOrbitTable {
  std::vector<std::int32_t> orbit_of; // point -> orbit id
  std::vector<std::int8_t> sign_of;   // point -> character of a transporter from the rep
  std::vector<std::int32_t> rep_of;   // orbit -> representative point
  std::vector<std::uint8_t> alive;    // orbit -> no orientation-reversing fixer found
  std::vector<std::int32_t> pos;      // orbit -> index within the cell's alive block (-1 dead)
  int alive_count = 0;
};

// a small generating set of the cell's stabilizer, with character values
inline std::vector<std::pair<Mat4, int>> stabilizer_generators(const Cell& c) {
  std::map<Mat4, int> idx;
  for (int i = 0; i < (int)c.stab.size(); ++i) idx.emplace(c.stab[i], i);
  std::vector<int> gens;
  std::vector<char> in_closure(c.stab.size(), 0);
  auto close = [&]() {
    std::fill(in_closure.begin(), in_closure.end(), 0);
    int id = idx.at(mat_identity());
    std::vector<int> stack{id};
    in_closure[id] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int g : gens) {
        Mat4 b = mat_mul(c.stab[a], c.stab[g]);
        int bi = idx.at(b);
        if (!in_closure[bi]) {
          in_closure[bi] = 1;
          ++count;
          stack.push_back(bi);
        }
      }
    }
    return count;
  };
  std::size_t closed = close();
  for (int i = 0; i < (int)c.stab.size() && closed < c.stab.size(); ++i) {
    if (in_closure[i]) continue;
    gens.push_back(i);
    closed = close();
  }
  std::vector<std::pair<Mat4, int>> out;
  for (int g : gens) out.push_back({c.stab[g], c.stab_chi[g]});
  return out;
}

struct EquivariantComplex {
  int N = 1;
  const CellSystem* sys = nullptr;
  CosetSpace coset{1};
  std::vector<CellOrbitTable> tables;           // per cell id
  std::array<std::vector<int>, 7> degree_cells; // degree -> cell ids in system order
  std::array<std::vector<int>, 7> offsets;      // starting basis index per cell
  std::array<int, 7> dim{};                     // basis size per degree
  std::array<SparseIntMat, 7> d;                // d[k]: C^k -> C^{k+1} (rows = C^{k+1})

  // basis position of (cell at `cell_slot` within its degree, alive orbit `o`)
  int basis_index(int degree, int cell_slot, int orbit) const {
    int ci = degree_cells[degree][cell_slot];
    return offsets[degree][cell_slot] + tables[ci].pos[orbit];
  }
};

inline CellOrbitTable scan_orbits(const Cell& c, const CosetSpace& coset) {
  CellOrbitTable t;
  int P = coset.size();
  t.orbit_of.assign(P, -1);
  t.sign_of.assign(P, 0);
  auto gens = stabilizer_generators(c);
  std::vector<int> stack;
  for (int p0 = 0; p0 < P; ++p0) {
    if (t.orbit_of[p0] != -1) continue;
    int orbit = (int)t.rep_of.size();
    t.rep_of.push_back(p0);
    t.alive.push_back(1);
    t.orbit_of[p0] = orbit;
    t.sign_of[p0] = 1;
    stack.assign(1, p0);
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (const auto& [g, chi] : gens) {
        int q2 = coset.act(q, g);
        std::int8_t s2 = (std::int8_t)(t.sign_of[q] * chi);
        if (t.orbit_of[q2] == -1) {
          t.orbit_of[q2] = orbit;
          t.sign_of[q2] = s2;
          stack.push_back(q2);
        } else if (t.sign_of[q2] != s2) {
          t.alive[orbit] = 0; // orientation-reversing loop: self-negating orbit
        }
      }
    }
  }
  t.pos.assign(t.rep_of.size(), -1);
  for (std::size_t o = 0; o < t.rep_of.size(); ++o)
    if (t.alive[o]) t.pos[o] = t.alive_count++;
  return t;
}

inline EquivariantComplex build_complex(const CellSystem& sys, int N) {
  EquivariantComplex cx;
  cx.N = N;
  cx.sys = &sys;
  cx.coset = CosetSpace(N);
  cx.tables.resize(sys.cells.size());
  for (std::size_t ci = 0; ci < sys.cells.size(); ++ci)
    cx.tables[ci] = scan_orbits(sys.cells[ci], cx.coset);
  for (int k = 0; k <= 6; ++k) {
    for (int ci : sys.by_cone_dim[10 - k]) {
      cx.degree_cells[k].push_back(ci);
      cx.offsets[k].push_back(cx.dim[k]);
      cx.dim[k] += cx.tables[ci].alive_count;
    }
  }
  // differentials
  for (int k = 0; k <= 5; ++k) {
    SparseIntMat& m = cx.d[k];
    m.rows = cx.dim[k + 1];
    m.cols = cx.dim[k];
    for (std::size_t slot = 0; slot < cx.degree_cells[k].size(); ++slot) {
      int ci = cx.degree_cells[k][slot];
      const Cell& c = sys.cells[ci];
      const CellOrbitTable& tc = cx.tables[ci];
      // precompute transports and target slots
      struct F {
        int target_slot;
        Mat4 point_map; // applied to coset points: inverse of the rep transport
        int sign;
        const CellOrbitTable* tt;
        int target_offset;
      };
      std::vector<F> fs;
      for (const auto& f : c.facets) {
        int tslot = -1;
        for (std::size_t s = 0; s < cx.degree_cells[k + 1].size(); ++s)
          if (cx.degree_cells[k + 1][s] == f.target) { tslot = (int)s; break; }
        assert(tslot >= 0);
        fs.push_back({tslot, mat_inverse_unimodular(f.to_rep), f.sign,
                      &cx.tables[f.target], cx.offsets[k + 1][tslot]});
      }
      for (std::size_t o = 0; o < tc.rep_of.size(); ++o) {
        if (!tc.alive[o]) continue;
        int col = cx.offsets[k][slot] + tc.pos[o];
        int x = tc.rep_of[o];
        for (const auto& f : fs) {
          int y = cx.coset.act(x, f.point_map);
          int o2 = f.tt->orbit_of[y];
          if (!f.tt->alive[o2]) continue;
          int row = f.target_offset + f.tt->pos[o2];
          m.add(row, col, (std::int64_t)f.sign * f.tt->sign_of[y]);
        }
      }
    }
  }
  return cx;
}

// ranks of all differentials over F_p, from which Betti numbers follow
inline std::array<int, 7> differential_ranks(const EquivariantComplex& cx, std::int64_t p) {
  std::array<int, 7> r{};
  for (int k = 0; k <= 5; ++k) r[k] = rank_mod_p(cx.d[k], p);
  r[6] = 0;
  return r;
}

inline std::array<int, 7> betti_numbers(const EquivariantComplex& cx, std::int64_t p) {
  auto r = differential_ranks(cx, p);
  std::array<int, 7> b{};
  for (int k = 0; k <= 6; ++k) b[k] = cx.dim[k] - r[k] - (k ? r[k - 1] : 0);
  return b;
}

} // namespace sl4cohom
