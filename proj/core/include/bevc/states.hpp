#ifndef BEVC_STATES_HPP
#define BEVC_STATES_HPP

#include <optional>
#include <string>
#include <vector>

#include "bevc/hilbert.hpp"

namespace bevc::states {

using hilbert::DensityOperator;
using hilbert::PureVector;

/// Geometric amplitude family a_n = a^n, c_n = c^n with 0 < a < c < 1,
/// truncated at N levels per mode (levels 1..N).
struct CVParams {
  double a;
  double c;
  int n_levels;

  CVParams(double a_, double c_, int n_levels_);
  /// a = exp(-beta), c = exp(-gamma); requires 0 < gamma < beta.
  static CVParams from_rates(double beta, double gamma, int n_levels);
};

/// General amplitude sequences, the opt-in replacement for the geometric
/// family. Entries may be complex; |c_{n+1}| < |c_n| < 1 is enforced and
/// every a_n must be nonzero.
struct Sequences {
  Vector a_seq;
  Vector c_seq;

  Sequences(Vector a_seq_, Vector c_seq_);
  int n_levels() const { return static_cast<int>(a_seq.size()); }
};

/// Coefficients alpha_2..alpha_K of the K (x) K family Sigma(alpha).
struct AlphaFamily {
  int k;
  std::vector<double> alphas;  // alpha_2..alpha_K, all > 0

  AlphaFamily(int k_, std::vector<double> alphas_);
  double alpha(int m) const;  // 1-based label, m in 2..K
  static AlphaFamily uniform(int k, double alpha);
  /// The Choi matrix parameters: K = 3, all alphas equal to 2.
  static AlphaFamily choi() { return AlphaFamily(3, {2.0, 2.0}); }
};

/// Truncated normalization bookkeeping. paper_closed_form is the verbatim
/// literature expression, reported side by side with the independently
/// summed values; the two disagree and are never asserted equal (see
/// discrepancy_note). tail_bound is a rigorous geometric majorant of
/// A_infinity - A_N.
struct NormalizationBreakdown {
  double psi_norm_sq = 0.0;           // q truncated at N
  double pair_sum = 0.0;              // sum of ||Psi_mn||^2, n < m <= N
  double a_total = 0.0;               // A_N = psi_norm_sq + pair_sum
  double tail_bound = 0.0;
  double pair_sum_limit = 0.0;        // independent closed form, N -> infinity
  double psi_norm_sq_limit = 0.0;     // a^2 / (1 - a^2)
  std::optional<double> paper_closed_form;  // absent when singular
  std::string discrepancy_note;
};

/// |Psi> = sum_{n=1}^{N} a^n |n,n>, not normalized.
PureVector build_psi(const CVParams& p);
PureVector build_psi(const Sequences& s);

/// |Psi_mn> = c_m a_n |n,m> + c_m^{-1} a_m |m,n>, for 1 <= n < m <= N.
PureVector build_psi_mn(int n, int m, const CVParams& p);
PureVector build_psi_mn(int n, int m, const Sequences& s);

/// rho = (|Psi><Psi| + sum_{n<m} |Psi_mn><Psi_mn|) / A_N. Trace 1 and
/// invariant under partial transposition.
DensityOperator build_rho(const CVParams& p);
DensityOperator build_rho(const Sequences& s);

NormalizationBreakdown normalization(const CVParams& p);

/// Sigma(alpha) / Tr Sigma with Sigma = |Phi><Phi| + sum_{n<m} |Phi_mn><Phi_mn|,
/// Phi = sum_n |n,n>, Phi_mn = alpha_m |n,m> + alpha_m^{-1} |m,n>.
DensityOperator build_sigma(const AlphaFamily& f);

/// Trace of the unnormalized Sigma: K + sum_{m=2}^{K} (m-1)(alpha_m^2 + alpha_m^{-2}).
double sigma_unnormalized_trace(const AlphaFamily& f);

/// Local filter diag(a^{-n_1}, ..., a^{-n_K}) on side A applied to the
/// output of project_local(build_rho(p), rows, rows), renormalized. Equals
/// build_sigma with alpha_m = c^{n_m}.
DensityOperator filter_to_sigma(const DensityOperator& rho_projected,
                                const CVParams& p, const std::vector<int>& rows);

/// Applies an explicit diagonal filter on side A and renormalizes.
DensityOperator apply_filter_a(const DensityOperator& op,
                               const Eigen::VectorXd& filter_diag);

/// Block-diagonal mixture over locally orthogonal level windows:
/// window i holds block with weight probs[i] on A-levels and B-levels
/// [i*d_A+1 .. (i+1)*d_A] (resp. d_B). Explicit window starts (1-based)
/// may be supplied; windows must not overlap.
DensityOperator build_direct_sum(const DensityOperator& block,
                                 const std::vector<double>& probs,
                                 const std::vector<int>& window_starts_a = {},
                                 const std::vector<int>& window_starts_b = {});

}  // namespace bevc::states

#endif  // BEVC_STATES_HPP
