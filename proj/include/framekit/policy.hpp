#pragma once

#include <stdexcept>

// Grid densities, lattice-sum cutoffs and tolerances governing every
// estimator. Reports carry the policy used, so numbers are reproducible.

namespace framekit {

struct TruncationPolicy {
  int grid_points = 4096;           // initial sup/inf grid over one period
  double k_tail_tol = 1e-14;        // relative drop tolerance for k-sums
  double n_tail_tol = 1e-10;        // relative drop tolerance for n-sums
  double quadrature_abs_tol = 1e-9; // per-coefficient quadrature target
  int lattice_cutoff_m = 60;        // modulation cutoff for expansions
  int lattice_cutoff_n = 12;        // translation cutoff for expansions
  double refine_rel_tol = 1e-4;     // stop refining when sup changes less
  int max_grid_points = 1 << 21;    // refinement ceiling

  void validate() const {
    if (grid_points <= 0 || max_grid_points <= 0 || lattice_cutoff_m <= 0 ||
        lattice_cutoff_n <= 0 || !(k_tail_tol > 0.0) || !(n_tail_tol > 0.0) ||
        !(quadrature_abs_tol > 0.0) || !(refine_rel_tol > 0.0))
      throw std::invalid_argument("TruncationPolicy: all fields must be positive");
  }
};

}  // namespace framekit
