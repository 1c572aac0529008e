#pragma once
// Classical eigenform data consumed by the boundary-cohomology dimension
// predictor and the Hecke-polynomial templates: GL(2) newform Galois orbits
// (weights 2 and 4) described by integer characteristic polynomials of their
// Hecke eigenvalues, and conjugate pairs of GL(3) eigenclasses with
// eigenvalues in an imaginary quadratic order.
//
// Record file format (line-delimited, whitespace-separated tokens; '#' starts
// a comment; blank lines ignored):
//
//   gl2 <level> <weight> <dim> <eps> { <ell> <c0> ... <c_dim> }*
//     One Galois orbit of newforms on Gamma0(level) of the given weight.
//     dim = degree of the Hecke eigenvalue field, eps = sign of the completed
//     L-function functional equation (+1 or -1).  Each block of dim+2 tokens
//     gives a prime ell (coprime to the level) followed by the monic integer
//     characteristic polynomial of the T_ell eigenvalue on the orbit,
//     coefficients listed from the constant term up; c_dim must be 1.
//
//   gl3 <level> <disc> <dim> { <ell> <x> <y> }*
//     One conjugate pair of GL(3) cuspidal eigenclasses of level p.  disc is
//     the discriminant of the imaginary quadratic order (disc < 0, disc = 1
//     mod 4) with w = (1+sqrt(disc))/2; dim is the dimension contributed by
//     each member of the pair.  Each triple gives the T(ell,1) eigenvalue of
//     one member as x + y*w; the partner carries the conjugate values and the
//     T(ell,2) eigenvalue is the conjugate of the T(ell,1) eigenvalue.

#include "sl4cohom/smallmat.hpp"
#include "sl4cohom/zpoly.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sl4cohom {

struct NewformOrbit {
  int level = 0;
  int weight = 0; // 2 or 4
  int dim = 0;    // degree of the eigenvalue field
  int eps = 0;    // completed-L functional equation sign, +1 or -1
  std::vector<std::pair<int, ZPoly>> ap; // (ell, monic charpoly of the T_ell eigenvalue)

  const ZPoly* charpoly_at(int ell) const {
    for (const auto& pr : ap)
      if (pr.first == ell) return &pr.second;
    return nullptr;
  }
};

struct GL3Pair {
  int level = 0;
  long disc = 0; // imaginary quadratic order discriminant, disc < 0, disc = 1 mod 4
  int dim = 0;   // dimension contributed by each member of the pair
  std::vector<std::pair<int, std::pair<i64, i64>>> ap; // ell -> (x, y), value x + y*w

  const std::pair<i64, i64>* eigenvalue_at(int ell) const {
    for (const auto& pr : ap)
      if (pr.first == ell) return &pr.second;
    return nullptr;
  }
};

struct FormsData {
  std::vector<NewformOrbit> gl2;
  std::vector<GL3Pair> gl3;
};

inline bool is_prime_int(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace detail {

inline std::runtime_error record_error(const std::string& where, int line,
                                       const std::string& msg) {
  std::ostringstream os;
  os << where << ":" << line << ": " << msg;
  return std::runtime_error(os.str());
}

} // namespace detail

inline FormsData load_records(std::istream& in, const std::string& where = "<stream>") {
  FormsData data;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string::size_type hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue; // blank
    if (kind == "gl2") {
      NewformOrbit o;
      if (!(ls >> o.level >> o.weight >> o.dim >> o.eps))
        throw detail::record_error(where, lineno, "gl2 record needs level weight dim eps");
      if (o.level < 1 || (o.weight != 2 && o.weight != 4) || o.dim < 1 ||
          (o.eps != 1 && o.eps != -1))
        throw detail::record_error(where, lineno, "gl2 header fields out of range");
      int ell;
      while (ls >> ell) {
        ZPoly cp(o.dim + 1);
        for (int i = 0; i <= o.dim; ++i) {
          std::string tok;
          if (!(ls >> tok))
            throw detail::record_error(where, lineno,
                                       "gl2 charpoly truncated (need dim+1 coefficients)");
          cp[i] = mpz_class(tok);
        }
        if (cp.back() != 1)
          throw detail::record_error(where, lineno, "gl2 charpoly must be monic");
        if (o.level % ell == 0)
          throw detail::record_error(where, lineno, "gl2 record lists ell dividing the level");
        o.ap.emplace_back(ell, std::move(cp));
      }
      if (!ls.eof())
        throw detail::record_error(where, lineno, "gl2 record has malformed trailing tokens");
      data.gl2.push_back(std::move(o));
    } else if (kind == "gl3") {
      GL3Pair g;
      if (!(ls >> g.level >> g.disc >> g.dim))
        throw detail::record_error(where, lineno, "gl3 record needs level disc dim");
      if (g.level < 1 || g.dim < 1 ||
          (g.disc != 0 && (g.disc >= 0 || ((g.disc % 4 + 4) % 4 != 1))))
        throw detail::record_error(where, lineno, "gl3 header fields out of range");
      int ell;
      while (ls >> ell) {
        if (g.disc == 0)
          throw detail::record_error(where, lineno,
                                     "gl3 eigenvalues require a recorded order (disc != 0)");
        i64 x, y;
        if (!(ls >> x >> y))
          throw detail::record_error(where, lineno, "gl3 eigenvalue triple truncated");
        g.ap.emplace_back(ell, std::make_pair(x, y));
      }
      if (!ls.eof())
        throw detail::record_error(where, lineno, "gl3 record has malformed trailing tokens");
      data.gl3.push_back(std::move(g));
    } else {
      throw detail::record_error(where, lineno, "unknown record kind '" + kind + "'");
    }
  }
  return data;
}

inline FormsData load_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open record file: " + path);
  return load_records(in, path);
}

inline void merge_records(FormsData& dst, const FormsData& src) {
  dst.gl2.insert(dst.gl2.end(), src.gl2.begin(), src.gl2.end());
  dst.gl3.insert(dst.gl3.end(), src.gl3.begin(), src.gl3.end());
}

// load the shipped eigenform fixtures relative to the working directory
inline FormsData load_forms_fixtures(const std::string& dir = "data/forms") {
  FormsData d = load_records_file(dir + "/gl2.txt");
  merge_records(d, load_records_file(dir + "/gl3.txt"));
  return d;
}

inline void save_records(std::ostream& out, const FormsData& data) {
  for (const auto& o : data.gl2) {
    out << "gl2 " << o.level << " " << o.weight << " " << o.dim << " " << o.eps;
    for (const auto& pr : o.ap) {
      out << "  " << pr.first;
      for (int i = 0; i <= o.dim; ++i)
        out << " " << (i < (int)pr.second.size() ? pr.second[i] : mpz_class(0));
    }
    out << "\n";
  }
  for (const auto& g : data.gl3) {
    out << "gl3 " << g.level << " " << g.disc << " " << g.dim;
    for (const auto& pr : g.ap)
      out << "  " << pr.first << " " << pr.second.first << " " << pr.second.second;
    out << "\n";
  }
}

// conjugate pair of GL(3) eigenclasses of level 53 with eigenvalues in
// Z[(1+sqrt(-11))/2]; shipped built-in so the level-53 worked example needs no
// external data
inline GL3Pair builtin_gl3_level53() {
  GL3Pair g;
  g.level = 53;
  g.disc = -11;
  g.dim = 2;
  g.ap = {{2, {-1, -2}}, {3, {-2, 2}}, {5, {1, 0}},
          {7, {-3, 0}},  {11, {1, 0}}, {13, {-2, -12}}};
  return g;
}

struct PredictionBreakdown {
  int weight2 = 0; // 2 * d_f per weight-2 orbit
  int weight4 = 0; // d_f per weight-4 orbit with eps = -1
  int gl3 = 0;     // 2 * d_eta per conjugate pair
  int total() const { return weight2 + weight4 + gl3; }
};

// predicted dimension of the degree-5 boundary (Eisenstein) cohomology at
// prime level p
inline PredictionBreakdown predict_dimension(int p, const FormsData& data) {
  if (!is_prime_int(p))
    throw std::invalid_argument(
        "dimension prediction is defined for prime level only; composite levels "
        "are covered by the heuristic annotation, not a checked prediction");
  PredictionBreakdown b;
  for (const auto& o : data.gl2) {
    if (o.level != p) continue;
    if (o.weight == 2)
      b.weight2 += 2 * o.dim;
    else if (o.weight == 4 && o.eps == -1)
      b.weight4 += o.dim;
  }
  for (const auto& g : data.gl3)
    if (g.level == p) b.gl3 += 2 * g.dim;
  return b;
}

} // namespace sl4cohom
