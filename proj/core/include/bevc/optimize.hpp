#ifndef BEVC_OPTIMIZE_HPP
#define BEVC_OPTIMIZE_HPP

#include <cstdint>

#include "bevc/common.hpp"

namespace bevc::optimize {

/// Multistart settings for the alternating product-state minimizer.
/// Restart i draws its start from an isolated stream seeded with
/// mix_seed(seed, i), so results are independent of scheduling.
struct SearchConfig {
  int restarts = 64;
  int max_sweeps = 500;
  double eps_conv = 1e-14;
  std::uint64_t seed = kDefaultSeed;
  double degeneracy_rel_tol = 1e-10;  // eigenvalue window treated as degenerate
};

/// Unit-normalized product vector phi (x) chi.
struct ProductVector {
  Vector phi;  // length d_A
  Vector chi;  // length d_B
  Vector kron() const;
};

/// Outcome of one multistart minimization of <phi chi| M |phi chi>.
struct MinimizeResult {
  double value = 0.0;         // minimum over all restarts
  ProductVector best;
  int restarts = 0;
  int iterations_used = 0;    // sweeps used by the winning restart
  bool converged = false;     // winning restart hit eps_conv before max_sweeps
};

/// Minimizes f(phi, chi) = <phi (x) chi| M |phi (x) chi> for Hermitian PSD M
/// by alternating exact best response: with chi fixed the optimal phi is the
/// lowest eigenvector of the d_A x d_A contraction of M by chi, and
/// symmetrically. The objective is monotone nonincreasing across sweeps;
/// a violation beyond rounding noise raises numerical_error. Degenerate
/// lowest eigenspaces are resolved toward the previous iterate.
MinimizeResult minimize_product_expectation(const Matrix& m, Dims dims,
                                            const SearchConfig& cfg);

/// Isotropic (Haar-direction) random unit vector, deterministic in seed.
Vector random_unit_vector(int dim, std::uint64_t seed);

/// Haar-distributed random unitary, deterministic in seed.
Matrix random_unitary(int dim, std::uint64_t seed);

}  // namespace bevc::optimize

#endif  // BEVC_OPTIMIZE_HPP
