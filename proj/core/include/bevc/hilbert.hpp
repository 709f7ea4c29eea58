#ifndef BEVC_HILBERT_HPP
#define BEVC_HILBERT_HPP

#include <vector>

#include "bevc/common.hpp"

namespace bevc::hilbert {

// Truncated two-mode Hilbert space: basis indexing, Hermitian operator
// container, partial transpose, spectral operations, Schmidt decomposition.
//
// Storage is 0-based; all external labels are 1-based. Flat indexing is
// row-major with the A index major, so the partial transpose is an explicit
// block transpose.

/// 1-based basis label |n, m> with n on side A and m on side B.
struct BasisIndex {
  int n = 1;
  int m = 1;

  int flat(Dims d) const;
  static BasisIndex from_flat(int flat, Dims d);
};

/// Complex amplitude array over the two-mode product basis. Not necessarily
/// normalized; norm_sq() is the squared 2-norm.
class PureVector {
 public:
  PureVector(Vector amplitudes, Dims dims);

  const Vector& amplitudes() const { return amps_; }
  Dims dims() const { return dims_; }
  double norm_sq() const { return amps_.squaredNorm(); }

 private:
  Vector amps_;
  Dims dims_;
};

/// Hermitian operator with basis metadata. Hermiticity is enforced at
/// construction: deviations below tol.hermiticity are symmetrized away,
/// larger ones are rejected. When trace_normalized is set the trace must
/// be 1 within tol.trace_unit.
class DensityOperator {
 public:
  DensityOperator(Matrix matrix, Dims dims, bool trace_normalized,
                  const Tolerances& tol = {});

  const Matrix& matrix() const { return mat_; }
  Dims dims() const { return dims_; }
  bool trace_normalized() const { return normalized_; }
  double trace_real() const { return mat_.trace().real(); }

 private:
  Matrix mat_;
  Dims dims_;
  bool normalized_;
};

/// Schmidt decomposition of a bipartite pure vector:
/// v = sum_k c_k u_k (x) w_k with c_k descending and u, w orthonormal
/// (columns of left_vectors / right_vectors).
struct SchmidtData {
  Eigen::VectorXd coefficients;
  Matrix left_vectors;
  Matrix right_vectors;

  /// Number of coefficients above rel_tol * coefficients(0).
  int rank(double rel_tol = 1e-12) const;
};

/// Partial transpose on the B side: sigma_{m mu, n nu} = op_{m nu, n mu}.
/// An involution; preserves trace and Hermiticity.
DensityOperator partial_transpose(const DensityOperator& op);

/// Smallest eigenvalue of a Hermitian operator.
double min_eigenvalue(const DensityOperator& op);

/// Schmidt decomposition via SVD of the d_A x d_B coefficient matrix.
SchmidtData schmidt(const PureVector& v);

/// Orthogonal projector onto the span of eigenvectors of op with eigenvalue
/// above tau * (largest eigenvalue). Rejects op with an eigenvalue below
/// -tau * spectral norm (not a state).
DensityOperator range_projector(const DensityOperator& op, double tau,
                                const Tolerances& tol = {});

/// Local projective measurement P (x) Q onto the listed 1-based levels,
/// compressed to the |rows_a| (x) |rows_b| space and renormalized.
DensityOperator project_local(const DensityOperator& op,
                              const std::vector<int>& rows_a,
                              const std::vector<int>& rows_b,
                              const Tolerances& tol = {});

/// Partial traces; marginals of the two sides.
Matrix partial_trace_a(const DensityOperator& op);  // d_B x d_B
Matrix partial_trace_b(const DensityOperator& op);  // d_A x d_A

/// max |M - M^dag| elementwise.
double hermiticity_defect(const Matrix& m);

}  // namespace bevc::hilbert

#endif  // BEVC_HILBERT_HPP
