#include "bevc/optimize.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <numbers>
#include <random>

namespace bevc::optimize {

namespace {

// Uniform in [0,1) from the top 53 bits; keeps the stream identical across
// standard libraries (distribution classes are implementation-defined).
double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Complex gaussian_pair(std::mt19937_64& rng) {
  // Box-Muller; the pair forms one standard complex Gaussian.
  double u = canonical(rng);
  while (u == 0.0) u = canonical(rng);
  const double v = canonical(rng);
  const double r = std::sqrt(-2.0 * std::log(u));
  return {r * std::cos(2.0 * std::numbers::pi * v),
          r * std::sin(2.0 * std::numbers::pi * v)};
}

Vector gaussian_vector(int dim, std::mt19937_64& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = gaussian_pair(rng);
  return v;
}

// Contraction of the two-mode operator M by the B-side vector chi:
// out_{ab} = sum_{cd} conj(chi_c) M_{(a,c),(b,d)} chi_d.
Matrix contract_b(const Matrix& m, Dims d, const Vector& chi) {
  Matrix out(d.a, d.a);
  for (int a = 0; a < d.a; ++a)
    for (int b = 0; b < d.a; ++b)
      out(a, b) = chi.dot(m.block(a * d.b, b * d.b, d.b, d.b) * chi);
  return out;
}

// out_{cd} = sum_{ab} conj(phi_a) M_{(a,c),(b,d)} phi_b.
Matrix contract_a(const Matrix& m, Dims d, const Vector& phi) {
  Matrix out = Matrix::Zero(d.b, d.b);
  for (int a = 0; a < d.a; ++a)
    for (int b = 0; b < d.a; ++b)
      out += std::conj(phi(a)) * phi(b) * m.block(a * d.b, b * d.b, d.b, d.b);
  return out;
}

// Lowest eigenvector; within a degenerate window the component of `previous`
// inside the eigenspace wins, preventing oscillation between equivalent
// candidates.
Vector lowest_eigvec(const Matrix& m, const Vector& previous, double degeneracy_rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw numerical_error("eigensolver failed in alternating minimization");
  const auto& vals = es.eigenvalues();
  const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1.0);
  const double window = vals(0) + degeneracy_rel_tol * scale;
  int width = 1;
  while (width < vals.size() && vals(width) <= window) ++width;
  if (width == 1 || previous.size() != m.rows()) return es.eigenvectors().col(0);
  const auto basis = es.eigenvectors().leftCols(width);
  Vector projected = basis * (basis.adjoint() * previous);
  const double nrm = projected.norm();
  if (nrm < 1e-12) return es.eigenvectors().col(0);
  return projected / nrm;
}

double objective(const Matrix& m, Dims d, const Vector& phi, const Vector& chi) {
  Vector v(d.total());
  for (int a = 0; a < d.a; ++a)
    for (int c = 0; c < d.b; ++c) v(a * d.b + c) = phi(a) * chi(c);
  return std::real(v.dot(m * v));
}

}  // namespace

Vector ProductVector::kron() const {
  Vector v(phi.size() * chi.size());
  for (Eigen::Index a = 0; a < phi.size(); ++a)
    for (Eigen::Index c = 0; c < chi.size(); ++c)
      v(a * chi.size() + c) = phi(a) * chi(c);
  return v;
}

Vector random_unit_vector(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector v = gaussian_vector(dim, rng);
  while (v.norm() < 1e-6) v = gaussian_vector(dim, rng);
  return v / v.norm();
}

Matrix random_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix g(dim, dim);
  for (int j = 0; j < dim; ++j) g.col(j) = gaussian_vector(dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases so the distribution is Haar and the result is
  // independent of the QR sign convention.
  for (int j = 0; j < dim; ++j) {
    const Complex rj = r(j, j);
    q.col(j) *= (std::abs(rj) == 0.0) ? 1.0 : rj / std::abs(rj);
  }
  return q;
}

MinimizeResult minimize_product_expectation(const Matrix& m, Dims dims,
                                            const SearchConfig& cfg) {
  if (m.rows() != dims.total() || m.cols() != dims.total())
    throw invalid_input("operator size must equal d_A*d_B");
  if (cfg.restarts < 1 || cfg.max_sweeps < 1)
    throw invalid_input("SearchConfig requires restarts >= 1 and max_sweeps >= 1");

  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
  MinimizeResult result;
  result.restarts = cfg.restarts;
  bool have_best = false;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(restart)));
    Vector phi = gaussian_vector(dims.a, rng);
    Vector chi = gaussian_vector(dims.b, rng);
    phi /= phi.norm();
    chi /= chi.norm();

    double value = objective(m, dims, phi, chi);
    int sweeps = 0;
    bool converged = false;
    for (; sweeps < cfg.max_sweeps; ++sweeps) {
      phi = lowest_eigvec(contract_b(m, dims, chi), phi, cfg.degeneracy_rel_tol);
      chi = lowest_eigvec(contract_a(m, dims, phi), chi, cfg.degeneracy_rel_tol);
      const double next = objective(m, dims, phi, chi);
      if (next > value + 1e-12 * scale)
        throw numerical_error("alternating minimization objective increased");
      const double improvement = value - next;
      value = next;
      if (improvement < cfg.eps_conv) {
        converged = true;
        ++sweeps;
        break;
      }
    }
    if (!have_best || value < result.value) {
      have_best = true;
      result.value = value;
      result.best = ProductVector{phi, chi};
      result.iterations_used = sweeps;
      result.converged = converged;
    }
  }
  return result;
}

}  // namespace bevc::optimize
