#ifndef BEVC_OPTICS_HPP
#define BEVC_OPTICS_HPP

#include <vector>

#include "bevc/hilbert.hpp"
#include "bevc/states.hpp"

namespace bevc::optics {

using hilbert::DensityOperator;
using hilbert::PureVector;

// Truncated-Fock-space realization of the preparation protocol. Occupation
// labels run 0..N-1 (vacuum included); the diagonal state labels elsewhere
// in the library run 1..N. The bridge is the fixed identification
// "occupation n = level n" with the occupation-0 sector projected away when
// comparing against the direct construction (see compare_protocol_to_direct).

/// Creation/annihilation operators of the two modes, embedded into the
/// two-mode space by tensoring with identity. a_raise is the adjoint of
/// a_lower; the number operator a_raise*a_lower is diagonal with entries
/// 0..N-1.
struct ModeOps {
  int n_levels = 0;
  Matrix a_lower, a_raise, b_lower, b_raise;

  static ModeOps make(int n_levels);
  Matrix number_a() const { return a_raise * a_lower; }
  Matrix number_b() const { return b_raise * b_lower; }
};

/// Protocol settings: a_n = exp(-beta n), c_n = exp(-gamma n) with
/// 0 < gamma < beta, mixture terms up to k_max, and an L-level Kerr ancilla
/// with the given phases (defaults to the uniform grid 2*pi*i/L).
struct ProtocolParams {
  double beta;
  double gamma;
  int k_max;
  int ancilla_levels;
  std::vector<double> phases;

  ProtocolParams(double beta_, double gamma_, int k_max_, int ancilla_levels_,
                 std::vector<double> phases_ = {});
};

/// Uniform phase grid x_i = 2*pi*i/L, i = 1..L.
std::vector<double> uniform_phases(int l_levels);

/// Two-mode squeezed state sum_n lambda^n |n,n> (occupations), built by
/// applying the series of lambda * A_raise B_raise to the vacuum. Requires
/// |lambda| < 1.
PureVector build_squeezed(double lambda, int n_levels);

/// Projector onto photon-number difference k: sum_n |n,n+k><n,n+k| over
/// occupations with n+k <= N-1. Spectral form of delta(B'B - A'A - k).
Matrix delta_k(int k, int n_levels);

/// V = exp(-beta A'A - gamma B'B) + U exp(-(beta-gamma) B'B), with U the
/// mode swap U|n,m> = |m,n>. Non-unitary by design (a filtering element).
Matrix build_v(const ProtocolParams& p, int n_levels);

/// Mode swap unitary U|n,m> = |m,n>.
Matrix swap_modes(int n_levels);

/// (|Psi><Psi| + sum_{k=1}^{k_max} V delta_k V') / trace on occupations
/// 0..N-1. Requires k_max <= N-2 so every mixture term fits the truncation.
DensityOperator assemble_protocol_state(const ProtocolParams& p, int n_levels);

/// Diagonal operator with entry (1/L) sum_i exp(i x_i (n-m+k)) on |n,m>.
/// With the uniform grid this is exactly 1 where (n-m+k) = 0 mod L and 0
/// otherwise, so L > (N-1)+k reproduces delta_k without aliasing.
Matrix kerr_delta_approx(int k, const std::vector<double>& phases, int n_levels);

/// sup-norm error of a Kerr approximation against the exact delta_k.
double kerr_sup_error(const Matrix& kerr, int k, int n_levels);

struct ProtocolComparison {
  double frobenius_distance = 0.0;      // aligned protocol vs direct rho
  std::vector<double> per_k_residuals;  // max elementwise V delta_k V' defect
  int direct_n_levels = 0;              // truncation of the compared rho
};

/// Projects the occupation-0 sector out of the protocol state, relabels
/// occupations 1..N-1 as levels 1..N-1 and compares against
/// build_rho(a = e^{-beta}, c = e^{-gamma}, N-1). Also checks, per k, the
/// identity V delta_k V' = sum_n |Psi_{n+k,n}><Psi_{n+k,n}| with the
/// occupation-labelled amplitudes.
ProtocolComparison compare_protocol_to_direct(const ProtocolParams& p,
                                              int n_levels);

}  // namespace bevc::optics

#endif  // BEVC_OPTICS_HPP
