#ifndef BEVC_WITNESS_HPP
#define BEVC_WITNESS_HPP

#include <string>

#include "bevc/hilbert.hpp"
#include "bevc/optimize.hpp"

namespace bevc::witness {

using hilbert::DensityOperator;
using optimize::SearchConfig;

/// Smallest product-state expectation of a projector Q, found by the same
/// alternating multistart engine as the range search. flagged_zero marks a
/// minimum below the floor: the complementary range was not actually
/// product-vector-free, which is a caller error.
struct EpsilonResult {
  double value = 0.0;
  bool flagged_zero = false;
  int restarts = 0;
  int iterations_used = 0;
};

struct WitnessConfig {
  SearchConfig search;
  double range_tau = 1e-12;
  double flag_floor = 1e-10;
  // The optimizer can only overestimate the true product minimum of Q, and
  // the construction stays valid for any 0 < eps <= eps_true, so the
  // published value keeps a one-sided safety margin.
  double safety_factor = 0.9;
  Tolerances tol;
};

/// W = Q - eps*I with Q the kernel projector of the source state. Negative
/// on the source, nonnegative on every product state.
struct Witness {
  Matrix w;
  Dims dims{0, 0};
  double epsilon_used = 0.0;
  double epsilon_opt = 0.0;         // raw optimizer minimum
  std::string source_state_id;
  int optimizer_restarts = 0;
  int optimizer_iterations = 0;

  DensityOperator as_operator() const;
};

EpsilonResult epsilon_min(const DensityOperator& q_projector,
                          const SearchConfig& cfg, double flag_floor = 1e-10);

/// Requires a state previously certified BOUND_ENTANGLED_CERTIFIED; a
/// flagged-zero epsilon (product vector in the range after all) is an error.
Witness build_witness(const DensityOperator& state, const WitnessConfig& cfg,
                      const std::string& source_state_id = "");

/// Positive non-completely-positive map induced by the witness through the
/// state-map correspondence Lambda(X) = Tr_A[ W (X^T (x) I) ].
class InducedMap {
 public:
  InducedMap(Matrix w, Dims dims);

  /// X must be d_A x d_A; result is d_B x d_B. Hermitian inputs map to
  /// Hermitian outputs.
  Matrix apply(const Matrix& x) const;

  /// sum_{ij} |i><j| (x) Lambda(|i><j|); equals W elementwise.
  Matrix choi_matrix() const;

  Dims dims() const { return dims_; }

 private:
  Matrix w_;
  Dims dims_;
};

InducedMap induced_map(const Witness& w);

}  // namespace bevc::witness

#endif  // BEVC_WITNESS_HPP
