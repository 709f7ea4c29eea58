#include "bevc/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace bevc::hilbert {

namespace {

void check_dims(Dims d) {
  if (d.a < 1 || d.b < 1) throw invalid_input("Dims requires d_A, d_B >= 1");
  if (d.total() > kMaxTotalDimension)
    throw invalid_input("total dimension d_A*d_B exceeds the dense-matrix limit");
}

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& m, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.compute(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numerical_error("Hermitian eigensolver failed to converge");
  return es;
}

}  // namespace

int BasisIndex::flat(Dims d) const {
  if (n < 1 || n > d.a || m < 1 || m > d.b)
    throw invalid_input("BasisIndex out of range: need 1 <= n <= d_A, 1 <= m <= d_B");
  return (n - 1) * d.b + (m - 1);
}

BasisIndex BasisIndex::from_flat(int flat, Dims d) {
  if (flat < 0 || flat >= d.total())
    throw invalid_input("flat index out of range");
  return BasisIndex{flat / d.b + 1, flat % d.b + 1};
}

PureVector::PureVector(Vector amplitudes, Dims dims)
    : amps_(std::move(amplitudes)), dims_(dims) {
  check_dims(dims_);
  if (amps_.size() != dims_.total())
    throw invalid_input("PureVector length must equal d_A*d_B");
  if (!amps_.allFinite()) throw invalid_input("PureVector amplitudes must be finite");
}

DensityOperator::DensityOperator(Matrix matrix, Dims dims, bool trace_normalized,
                                 const Tolerances& tol)
    : mat_(std::move(matrix)), dims_(dims), normalized_(trace_normalized) {
  check_dims(dims_);
  if (mat_.rows() != dims_.total() || mat_.cols() != dims_.total())
    throw invalid_input("matrix size must equal (d_A*d_B) x (d_A*d_B)");
  if (!mat_.allFinite()) throw invalid_input("operator entries must be finite");
  const double defect = hermiticity_defect(mat_);
  if (defect > tol.hermiticity)
    throw invalid_input("operator is not Hermitian within tolerance (defect " +
                        std::to_string(defect) + ")");
  mat_ = ((mat_ + mat_.adjoint()) / 2.0).eval();
  if (normalized_) {
    const double dev = std::abs(mat_.trace().real() - 1.0);
    if (dev > tol.trace_unit || std::abs(mat_.trace().imag()) > tol.trace_unit)
      throw invalid_input("trace-normalized operator must have trace 1 (deviation " +
                          std::to_string(dev) + ")");
  }
}

int SchmidtData::rank(double rel_tol) const {
  if (coefficients.size() == 0) return 0;
  const double cutoff = rel_tol * coefficients(0);
  int r = 0;
  for (Eigen::Index i = 0; i < coefficients.size(); ++i)
    if (coefficients(i) > cutoff) ++r;
  return r;
}

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityOperator partial_transpose(const DensityOperator& op) {
  const Dims d = op.dims();
  Matrix out(d.total(), d.total());
  for (int i = 0; i < d.a; ++i)
    for (int j = 0; j < d.a; ++j)
      out.block(i * d.b, j * d.b, d.b, d.b) =
          op.matrix().block(i * d.b, j * d.b, d.b, d.b).transpose();
  return DensityOperator(std::move(out), d, false);
}

double min_eigenvalue(const DensityOperator& op) {
  return eigensolve(op.matrix(), false).eigenvalues().minCoeff();
}

SchmidtData schmidt(const PureVector& v) {
  if (v.norm_sq() == 0.0) throw invalid_input("schmidt requires a nonzero vector");
  const Dims d = v.dims();
  Matrix coeff(d.a, d.b);
  for (int n = 0; n < d.a; ++n)
    for (int m = 0; m < d.b; ++m) coeff(n, m) = v.amplitudes()(n * d.b + m);
  Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtData out;
  out.coefficients = svd.singularValues();
  out.left_vectors = svd.matrixU();
  // coeff = U S V^dag, so v = sum_k s_k u_k (x) conj(v_k).
  out.right_vectors = svd.matrixV().conjugate();
  return out;
}

DensityOperator range_projector(const DensityOperator& op, double tau,
                                const Tolerances& tol) {
  auto es = eigensolve(op.matrix(), true);
  const auto& vals = es.eigenvalues();
  const double top = vals.maxCoeff();
  const double scale = vals.cwiseAbs().maxCoeff();
  if (scale > 0.0 && vals.minCoeff() < -tau * scale)
    throw invalid_input("range_projector input has a negative eigenvalue beyond tau (not a state)");
  Matrix p = Matrix::Zero(op.matrix().rows(), op.matrix().cols());
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) > tau * top)
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return DensityOperator(std::move(p), op.dims(), false, tol);
}

namespace {

std::vector<int> checked_rows(const std::vector<int>& rows, int d, const char* side) {
  if (rows.empty()) throw invalid_input(std::string("empty row set on side ") + side);
  std::vector<int> sorted = rows;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw invalid_input(std::string("duplicate row labels on side ") + side);
  if (sorted.front() < 1 || sorted.back() > d)
    throw invalid_input(std::string("row labels out of 1..d range on side ") + side);
  return sorted;
}

}  // namespace

DensityOperator project_local(const DensityOperator& op,
                              const std::vector<int>& rows_a,
                              const std::vector<int>& rows_b,
                              const Tolerances& tol) {
  const Dims d = op.dims();
  const auto ra = checked_rows(rows_a, d.a, "A");
  const auto rb = checked_rows(rows_b, d.b, "B");
  const Dims dc{static_cast<int>(ra.size()), static_cast<int>(rb.size())};
  Matrix out(dc.total(), dc.total());
  for (int i = 0; i < dc.a; ++i)
    for (int j = 0; j < dc.b; ++j)
      for (int k = 0; k < dc.a; ++k)
        for (int l = 0; l < dc.b; ++l)
          out(i * dc.b + j, k * dc.b + l) =
              op.matrix()((ra[i] - 1) * d.b + (rb[j] - 1),
                          (ra[k] - 1) * d.b + (rb[l] - 1));
  const double tr = out.trace().real();
  if (tr <= 0.0)
    throw invalid_input("local projection has zero post-measurement trace");
  out /= tr;
  return DensityOperator(std::move(out), dc, true, tol);
}

Matrix partial_trace_a(const DensityOperator& op) {
  const Dims d = op.dims();
  Matrix out = Matrix::Zero(d.b, d.b);
  for (int i = 0; i < d.a; ++i)
    out += op.matrix().block(i * d.b, i * d.b, d.b, d.b);
  return out;
}

Matrix partial_trace_b(const DensityOperator& op) {
  const Dims d = op.dims();
  Matrix out = Matrix::Zero(d.a, d.a);
  for (int i = 0; i < d.a; ++i)
    for (int j = 0; j < d.a; ++j)
      out(i, j) = op.matrix().block(i * d.b, j * d.b, d.b, d.b).trace();
  return out;
}

}  // namespace bevc::hilbert
