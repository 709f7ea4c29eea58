#include "bevc/optics.hpp"

#include <cmath>
#include <numbers>

namespace bevc::optics {

namespace {

Matrix single_mode_lower(int n_levels) {
  Matrix a = Matrix::Zero(n_levels, n_levels);
  for (int n = 1; n < n_levels; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

int flat(int n, int m, int n_levels) { return n * n_levels + m; }

void check_levels(int n_levels) {
  if (n_levels < 1) throw invalid_input("n_levels must be >= 1");
  if (n_levels * n_levels > kMaxTotalDimension)
    throw invalid_input("two-mode dimension exceeds the dense-matrix limit");
}

}  // namespace

ModeOps ModeOps::make(int n_levels) {
  check_levels(n_levels);
  const Matrix a = single_mode_lower(n_levels);
  const Matrix id = Matrix::Identity(n_levels, n_levels);
  ModeOps ops;
  ops.n_levels = n_levels;
  ops.a_lower = kron(a, id);
  ops.a_raise = kron(a.adjoint(), id);
  ops.b_lower = kron(id, a);
  ops.b_raise = kron(id, a.adjoint());
  return ops;
}

ProtocolParams::ProtocolParams(double beta_, double gamma_, int k_max_,
                               int ancilla_levels_, std::vector<double> phases_)
    : beta(beta_), gamma(gamma_), k_max(k_max_), ancilla_levels(ancilla_levels_),
      phases(std::move(phases_)) {
  if (!(0.0 < gamma && gamma < beta))
    throw invalid_input("ProtocolParams requires 0 < gamma < beta");
  if (k_max < 0) throw invalid_input("k_max must be >= 0");
  if (ancilla_levels < 1) throw invalid_input("ancilla needs L >= 1 levels");
  if (phases.empty()) phases = uniform_phases(ancilla_levels);
  if (static_cast<int>(phases.size()) != ancilla_levels)
    throw invalid_input("phase list length must equal the ancilla level count");
  for (double x : phases)
    if (!std::isfinite(x)) throw invalid_input("phases must be finite");
}

std::vector<double> uniform_phases(int l_levels) {
  if (l_levels < 1) throw invalid_input("uniform_phases requires L >= 1");
  std::vector<double> x(static_cast<std::size_t>(l_levels));
  for (int i = 1; i <= l_levels; ++i)
    x[static_cast<std::size_t>(i - 1)] = 2.0 * std::numbers::pi * i / l_levels;
  return x;
}

PureVector build_squeezed(double lambda, int n_levels) {
  check_levels(n_levels);
  if (!(std::abs(lambda) < 1.0))
    throw invalid_input("two-mode squeezing requires |lambda| < 1");
  const ModeOps ops = ModeOps::make(n_levels);
  const Matrix pair_raise = ops.a_raise * ops.b_raise;
  Vector state = Vector::Zero(n_levels * n_levels);
  Vector term = Vector::Zero(n_levels * n_levels);
  term(flat(0, 0, n_levels)) = 1.0;
  state = term;
  // exp(lambda A'B')|0,0>; the series terminates at the truncation.
  for (int j = 1; j < n_levels; ++j) {
    term = (lambda / double(j)) * (pair_raise * term);
    state += term;
  }
  return PureVector(std::move(state), Dims{n_levels, n_levels});
}

Matrix delta_k(int k, int n_levels) {
  check_levels(n_levels);
  if (k < 0 || k >= n_levels)
    throw invalid_input("delta_k requires 0 <= k < N");
  Matrix out = Matrix::Zero(n_levels * n_levels, n_levels * n_levels);
  for (int n = 0; n + k < n_levels; ++n) {
    const int idx = flat(n, n + k, n_levels);
    out(idx, idx) = 1.0;
  }
  return out;
}

Matrix swap_modes(int n_levels) {
  check_levels(n_levels);
  Matrix u = Matrix::Zero(n_levels * n_levels, n_levels * n_levels);
  for (int n = 0; n < n_levels; ++n)
    for (int m = 0; m < n_levels; ++m)
      u(flat(m, n, n_levels), flat(n, m, n_levels)) = 1.0;
  return u;
}

Matrix build_v(const ProtocolParams& p, int n_levels) {
  check_levels(n_levels);
  const int d = n_levels * n_levels;
  Matrix filter = Matrix::Zero(d, d);
  Matrix swap_branch = Matrix::Zero(d, d);
  for (int n = 0; n < n_levels; ++n)
    for (int m = 0; m < n_levels; ++m) {
      filter(flat(n, m, n_levels), flat(n, m, n_levels)) =
          std::exp(-p.beta * n - p.gamma * m);
      swap_branch(flat(n, m, n_levels), flat(n, m, n_levels)) =
          std::exp(-(p.beta - p.gamma) * m);
    }
  return filter + swap_modes(n_levels) * swap_branch;
}

DensityOperator assemble_protocol_state(const ProtocolParams& p, int n_levels) {
  check_levels(n_levels);
  if (p.k_max > n_levels - 2)
    throw invalid_input("assemble_protocol_state requires k_max <= N-2");
  const PureVector psi = build_squeezed(std::exp(-p.beta), n_levels);
  Matrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
  const Matrix v = build_v(p, n_levels);
  for (int k = 1; k <= p.k_max; ++k)
    rho += v * delta_k(k, n_levels) * v.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(std::move(rho), Dims{n_levels, n_levels}, true);
}

Matrix kerr_delta_approx(int k, const std::vector<double>& phases, int n_levels) {
  check_levels(n_levels);
  if (phases.empty()) throw invalid_input("kerr_delta_approx requires phases");
  const int l_levels = static_cast<int>(phases.size());
  Matrix out = Matrix::Zero(n_levels * n_levels, n_levels * n_levels);
  for (int n = 0; n < n_levels; ++n)
    for (int m = 0; m < n_levels; ++m) {
      Complex sum = 0.0;
      for (double x : phases)
        sum += std::exp(Complex(0.0, x * double(n - m + k)));
      const int idx = flat(n, m, n_levels);
      out(idx, idx) = sum / double(l_levels);
    }
  return out;
}

double kerr_sup_error(const Matrix& kerr, int k, int n_levels) {
  return (kerr - delta_k(k, n_levels)).cwiseAbs().maxCoeff();
}

namespace {

// Occupation-labelled Eq.-(4)-style vector: amplitude a_n c_m on |n,m> and
// a_m / c_m on |m,n> with a_n = exp(-beta n), c_n = exp(-gamma n), n >= 0.
Vector occupation_pair_vector(int n, int m, const ProtocolParams& p, int n_levels) {
  Vector v = Vector::Zero(n_levels * n_levels);
  const double an = std::exp(-p.beta * n);
  const double am = std::exp(-p.beta * m);
  const double cm = std::exp(-p.gamma * m);
  v(flat(n, m, n_levels)) = cm * an;
  v(flat(m, n, n_levels)) = am / cm;
  return v;
}

}  // namespace

ProtocolComparison compare_protocol_to_direct(const ProtocolParams& p,
                                              int n_levels) {
  if (n_levels < 3)
    throw invalid_input("comparison needs N >= 3 occupation levels");
  const DensityOperator protocol = assemble_protocol_state(p, n_levels);

  ProtocolComparison out;
  const Matrix v = build_v(p, n_levels);
  for (int k = 1; k <= p.k_max; ++k) {
    const Matrix lhs = v * delta_k(k, n_levels) * v.adjoint();
    Matrix rhs = Matrix::Zero(lhs.rows(), lhs.cols());
    for (int n = 0; n + k < n_levels; ++n) {
      const Vector w = occupation_pair_vector(n, n + k, p, n_levels);
      rhs += w * w.adjoint();
    }
    out.per_k_residuals.push_back((lhs - rhs).cwiseAbs().maxCoeff());
  }

  // Drop the occupation-0 sector (levels 1..N-1 remain) and compare with
  // the direct construction at the matched truncation N-1.
  std::vector<int> keep;
  for (int level = 2; level <= n_levels; ++level) keep.push_back(level);
  const DensityOperator aligned = hilbert::project_local(protocol, keep, keep);
  out.direct_n_levels = n_levels - 1;
  const DensityOperator direct = states::build_rho(
      states::CVParams::from_rates(p.beta, p.gamma, n_levels - 1));
  out.frobenius_distance = (aligned.matrix() - direct.matrix()).norm();
  return out;
}

}  // namespace bevc::optics
