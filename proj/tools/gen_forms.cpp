// Regenerates the GL(2) newform-orbit fixture file from the built-in
// weight-2/weight-4 modular-symbols computation.  Writes one `gl2` record per
// Galois orbit for every prime level up to the given bound, with T_ell
// characteristic polynomials at ell in {2,3,5,7,11,13} (primes dividing the
// level skipped).  The GL(3) fixture file is maintained by hand; see
// data/forms/gl3.txt.
//
// Usage: gen_forms [max_level] [output_path]

#include "sl4cohom/modsym.hpp"

#include <fstream>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  using namespace sl4cohom;
  int max_level = argc > 1 ? std::stoi(argv[1]) : 83;
  std::string out_path = argc > 2 ? argv[2] : "data/forms/gl2.txt";

  FormsData data;
  for (int p = 2; p <= max_level; ++p) {
    if (!is_prime_int(p)) continue;
    for (int k : {2, 4}) {
      ModularSymbolSpace ms(p, k);
      for (auto& o : ms.newform_orbits({2, 3, 5, 7, 11, 13})) data.gl2.push_back(o);
    }
    PredictionBreakdown b = predict_dimension(p, data);
    std::cerr << "level " << p << ": gl2-only prediction " << b.weight2 << "+"
              << b.weight4 << " = " << b.total() << "\n";
  }

  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot open " << out_path << " for writing\n";
    return 1;
  }
  out << "# GL(2) newform Galois orbits on Gamma0(p), weights 2 and 4, for all\n"
      << "# prime levels p <= " << max_level << ".  Generated by tools/gen_forms from\n"
      << "# the built-in modular-symbols computation; regenerate with:\n"
      << "#   gen_forms " << max_level << " data/forms/gl2.txt\n"
      << "# Format: see data/forms/FORMAT.md.\n";
  save_records(out, data);
  std::cerr << "wrote " << data.gl2.size() << " gl2 records to " << out_path << "\n";
  return 0;
}
