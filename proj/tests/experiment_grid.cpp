// Exponential-formula experiment over the full default grid:
// n in {4, 8, ..., 1024}, t in {0.25, 1, 4}, N in {1, 2, 8, 32},
// d in {1, 2, 3}. The convergence bound must hold in every cell.

#include <cmath>
#include <cstdio>
#include <vector>

#include "wgf/flow.hpp"

using namespace wgf;

int main() {
  const std::vector<int> n_list = {4, 8, 16, 32, 64, 128, 256, 512, 1024};
  const std::vector<double> t_list = {0.25, 1.0, 4.0};
  const std::vector<int> atoms = {1, 2, 8, 32};
  const std::vector<int> dims = {1, 2, 3};
  const std::vector<std::string> specs = {"potential:quadratic", "interaction:quadratic",
                                          "potential:cosine"};

  long cells = 0, rows = 0;
  int failures = 0;
  for (const auto& spec : specs) {
    const auto E = parse_functional(spec);
    const double lm = E.lambda_minus();
    for (double t : t_list)
      for (int n_atoms : atoms)
        for (int d : dims) {
          std::vector<int> admissible;
          for (int n : n_list)
            if (n > 2.0 * lm * t) admissible.push_back(n);
          if (admissible.empty()) continue;

          const auto mu0 =
              random_measure({derive_seed(1000 + cells, 9), "splitmix64/uniform-v1"}, n_atoms, d,
                             1.0);
          const auto table = exponential_formula_experiment(E, mu0, t, admissible);
          for (const auto& row : table.rows) {
            ++rows;
            if (!row.pass) {
              ++failures;
              std::printf("[FAIL] %s t=%g N=%d d=%d n=%d error=%.17g bound=%.17g\n", spec.c_str(),
                          t, n_atoms, d, row.n, row.error, row.bound);
            }
          }
          ++cells;
        }
  }
  std::printf("%s: %ld grid cells, %ld (n, t) rows, %d bound violations\n",
              failures == 0 ? "[PASS]" : "[FAIL]", cells, rows, failures);
  return failures == 0 ? 0 : 1;
}
