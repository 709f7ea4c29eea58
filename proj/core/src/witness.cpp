#include "bevc/witness.hpp"

#include <cmath>

namespace bevc::witness {

EpsilonResult epsilon_min(const DensityOperator& q_projector,
                          const SearchConfig& cfg, double flag_floor) {
  const Matrix& q = q_projector.matrix();
  if ((q * q - q).cwiseAbs().maxCoeff() > 1e-8)
    throw invalid_input("epsilon_min requires an idempotent projector");
  const auto r =
      optimize::minimize_product_expectation(q, q_projector.dims(), cfg);
  EpsilonResult out;
  out.value = std::max(r.value, 0.0);
  out.flagged_zero = out.value < flag_floor;
  if (out.flagged_zero) out.value = 0.0;
  out.restarts = r.restarts;
  out.iterations_used = r.iterations_used;
  return out;
}

DensityOperator Witness::as_operator() const {
  return DensityOperator(w, dims, false);
}

Witness build_witness(const DensityOperator& state, const WitnessConfig& cfg,
                      const std::string& source_state_id) {
  const DensityOperator range =
      hilbert::range_projector(state, cfg.range_tau, cfg.tol);
  const Matrix q =
      Matrix::Identity(range.matrix().rows(), range.matrix().cols()) -
      range.matrix();
  const DensityOperator q_op(q, state.dims(), false, cfg.tol);
  const EpsilonResult eps = epsilon_min(q_op, cfg.search, cfg.flag_floor);
  if (eps.flagged_zero)
    throw invalid_input(
        "witness source has a product vector in its range (epsilon flagged "
        "zero); only certified bound entangled states are valid sources");
  Witness out;
  out.dims = state.dims();
  out.epsilon_opt = eps.value;
  out.epsilon_used = cfg.safety_factor * eps.value;
  out.w = q - out.epsilon_used * Matrix::Identity(q.rows(), q.cols());
  out.source_state_id = source_state_id;
  out.optimizer_restarts = eps.restarts;
  out.optimizer_iterations = eps.iterations_used;
  return out;
}

InducedMap::InducedMap(Matrix w, Dims dims) : w_(std::move(w)), dims_(dims) {
  if (w_.rows() != dims_.total() || w_.cols() != dims_.total())
    throw invalid_input("witness matrix size must equal (d_A*d_B)^2");
}

Matrix InducedMap::apply(const Matrix& x) const {
  if (x.rows() != dims_.a || x.cols() != dims_.a)
    throw invalid_input("induced map input must be d_A x d_A");
  // Lambda(X)_{kl} = sum_{ij} X_{ij} <i,k| W |j,l>.
  Matrix out = Matrix::Zero(dims_.b, dims_.b);
  for (int i = 0; i < dims_.a; ++i)
    for (int j = 0; j < dims_.a; ++j)
      out += x(i, j) * w_.block(i * dims_.b, j * dims_.b, dims_.b, dims_.b);
  return out;
}

Matrix InducedMap::choi_matrix() const {
  Matrix out(dims_.total(), dims_.total());
  for (int i = 0; i < dims_.a; ++i)
    for (int j = 0; j < dims_.a; ++j) {
      Matrix e = Matrix::Zero(dims_.a, dims_.a);
      e(i, j) = 1.0;
      out.block(i * dims_.b, j * dims_.b, dims_.b, dims_.b) = apply(e);
    }
  return out;
}

InducedMap induced_map(const Witness& w) { return InducedMap(w.w, w.dims); }

}  // namespace bevc::witness
