#include "bevc/states.hpp"

#include <algorithm>
#include <cmath>

namespace bevc::states {

using hilbert::BasisIndex;

CVParams::CVParams(double a_, double c_, int n_levels_)
    : a(a_), c(c_), n_levels(n_levels_) {
  if (!(0.0 < a && a < c && c < 1.0))
    throw invalid_input("CVParams requires 0 < a < c < 1");
  if (n_levels < 2) throw invalid_input("CVParams requires N >= 2");
}

CVParams CVParams::from_rates(double beta, double gamma, int n_levels) {
  if (!(0.0 < gamma && gamma < beta))
    throw invalid_input("rates require 0 < gamma < beta");
  return CVParams(std::exp(-beta), std::exp(-gamma), n_levels);
}

Sequences::Sequences(Vector a_seq_, Vector c_seq_)
    : a_seq(std::move(a_seq_)), c_seq(std::move(c_seq_)) {
  if (a_seq.size() < 2 || a_seq.size() != c_seq.size())
    throw invalid_input("Sequences require equal lengths >= 2");
  for (Eigen::Index i = 0; i < c_seq.size(); ++i) {
    if (std::abs(a_seq(i)) == 0.0)
      throw invalid_input("Sequences require nonzero a_n");
    if (!(std::abs(c_seq(i)) < 1.0) || std::abs(c_seq(i)) == 0.0)
      throw invalid_input("Sequences require 0 < |c_n| < 1");
    if (i > 0 && !(std::abs(c_seq(i)) < std::abs(c_seq(i - 1))))
      throw invalid_input("Sequences require |c_{n+1}| < |c_n|");
  }
}

namespace {

Sequences geometric(const CVParams& p) {
  Vector a(p.n_levels), c(p.n_levels);
  for (int n = 1; n <= p.n_levels; ++n) {
    a(n - 1) = std::pow(p.a, n);
    c(n - 1) = std::pow(p.c, n);
  }
  return Sequences(std::move(a), std::move(c));
}

}  // namespace

AlphaFamily::AlphaFamily(int k_, std::vector<double> alphas_)
    : k(k_), alphas(std::move(alphas_)) {
  if (k < 2) throw invalid_input("AlphaFamily requires K >= 2");
  if (static_cast<int>(alphas.size()) != k - 1)
    throw invalid_input("AlphaFamily requires exactly K-1 coefficients alpha_2..alpha_K");
  for (double a : alphas)
    if (!(a > 0.0) || !std::isfinite(a))
      throw invalid_input("AlphaFamily coefficients must be strictly positive");
}

double AlphaFamily::alpha(int m) const {
  if (m < 2 || m > k) throw invalid_input("alpha label m must lie in 2..K");
  return alphas[static_cast<std::size_t>(m - 2)];
}

AlphaFamily AlphaFamily::uniform(int k, double alpha) {
  return AlphaFamily(k, std::vector<double>(static_cast<std::size_t>(k - 1), alpha));
}

PureVector build_psi(const Sequences& s) {
  const int n_levels = s.n_levels();
  const Dims d{n_levels, n_levels};
  Vector amps = Vector::Zero(d.total());
  for (int n = 1; n <= n_levels; ++n)
    amps(BasisIndex{n, n}.flat(d)) = s.a_seq(n - 1);
  return PureVector(std::move(amps), d);
}

PureVector build_psi(const CVParams& p) { return build_psi(geometric(p)); }

PureVector build_psi_mn(int n, int m, const Sequences& s) {
  const int n_levels = s.n_levels();
  if (!(1 <= n && n < m && m <= n_levels))
    throw invalid_input("build_psi_mn requires 1 <= n < m <= N");
  const Dims d{n_levels, n_levels};
  Vector amps = Vector::Zero(d.total());
  const Complex cm = s.c_seq(m - 1);
  amps(BasisIndex{n, m}.flat(d)) = cm * s.a_seq(n - 1);
  amps(BasisIndex{m, n}.flat(d)) = s.a_seq(m - 1) / cm;
  return PureVector(std::move(amps), d);
}

PureVector build_psi_mn(int n, int m, const CVParams& p) {
  return build_psi_mn(n, m, geometric(p));
}

DensityOperator build_rho(const Sequences& s) {
  const int n_levels = s.n_levels();
  const Dims d{n_levels, n_levels};
  Matrix rho = Matrix::Zero(d.total(), d.total());
  const auto add_projector = [&rho](const PureVector& v) {
    rho += v.amplitudes() * v.amplitudes().adjoint();
  };
  add_projector(build_psi(s));
  for (int n = 1; n <= n_levels; ++n)
    for (int m = n + 1; m <= n_levels; ++m) add_projector(build_psi_mn(n, m, s));
  rho /= rho.trace().real();
  return DensityOperator(std::move(rho), d, true);
}

DensityOperator build_rho(const CVParams& p) { return build_rho(geometric(p)); }

NormalizationBreakdown normalization(const CVParams& p) {
  NormalizationBreakdown out;
  const double a2 = p.a * p.a;
  const double c2 = p.c * p.c;
  for (int n = 1; n <= p.n_levels; ++n) out.psi_norm_sq += std::pow(a2, n);
  for (int m = 2; m <= p.n_levels; ++m)
    for (int n = 1; n < m; ++n)
      out.pair_sum += std::pow(c2, m) * std::pow(a2, n) +
                      std::pow(a2, m) / std::pow(c2, m);
  out.a_total = out.psi_norm_sq + out.pair_sum;

  // Geometric majorants of the three N-tails:
  //   sum_{n>N} a^{2n}                   = a^{2(N+1)} / (1-a^2)
  //   sum_{m>N} c^{2m} sum_{n<m} a^{2n} <= c^{2(N+1)} a^2 / ((1-c^2)(1-a^2))
  //   sum_{m>N} (m-1) (a/c)^{2m}         = r^{N+1} (N - (N-1) r) / (1-r)^2,
  //                                        r = (a/c)^2.
  const int n_cut = p.n_levels;
  const double r = a2 / c2;
  out.tail_bound = std::pow(a2, n_cut + 1) / (1.0 - a2) +
                   std::pow(c2, n_cut + 1) * a2 / ((1.0 - c2) * (1.0 - a2)) +
                   std::pow(r, n_cut + 1) * (n_cut - (n_cut - 1) * r) /
                       ((1.0 - r) * (1.0 - r));

  out.psi_norm_sq_limit = a2 / (1.0 - a2);
  // Independent summation of the double series: the first piece telescopes
  // to a^2 c^4 / ((1-c^2)(1-a^2 c^2)), the second to a^4 / (c^2-a^2)^2.
  out.pair_sum_limit = a2 * c2 * c2 / ((1.0 - c2) * (1.0 - a2 * c2)) +
                       a2 * a2 / ((c2 - a2) * (c2 - a2));

  const double a4 = a2 * a2;
  if (c2 > a2 && c2 > a4) {
    out.paper_closed_form = a4 * c2 * c2 / ((1.0 - c2) * (1.0 - a2 * c2)) +
                            a4 * a2 / ((c2 - a2) * (c2 - a4));
  } else {
    out.paper_closed_form = std::nullopt;  // singular; never divide
  }
  out.discrepancy_note =
      "paper_closed_form does not match term-by-term summation of "
      "sum_{1<=n<m} ||Psi_mn||^2 (e.g. its first piece carries a^4 where the "
      "sum gives a^2); both values are reported, neither is asserted equal.";
  return out;
}

double sigma_unnormalized_trace(const AlphaFamily& f) {
  double tr = f.k;
  for (int m = 2; m <= f.k; ++m) {
    const double am = f.alpha(m);
    tr += (m - 1) * (am * am + 1.0 / (am * am));
  }
  return tr;
}

DensityOperator build_sigma(const AlphaFamily& f) {
  const Dims d{f.k, f.k};
  Matrix sigma = Matrix::Zero(d.total(), d.total());
  Vector phi = Vector::Zero(d.total());
  for (int n = 1; n <= f.k; ++n) phi(BasisIndex{n, n}.flat(d)) = 1.0;
  sigma += phi * phi.adjoint();
  for (int n = 1; n <= f.k; ++n)
    for (int m = n + 1; m <= f.k; ++m) {
      Vector phi_mn = Vector::Zero(d.total());
      phi_mn(BasisIndex{n, m}.flat(d)) = f.alpha(m);
      phi_mn(BasisIndex{m, n}.flat(d)) = 1.0 / f.alpha(m);
      sigma += phi_mn * phi_mn.adjoint();
    }
  sigma /= sigma.trace().real();
  return DensityOperator(std::move(sigma), d, true);
}

DensityOperator apply_filter_a(const DensityOperator& op,
                               const Eigen::VectorXd& filter_diag) {
  const Dims d = op.dims();
  if (filter_diag.size() != d.a)
    throw invalid_input("filter length must equal d_A");
  Matrix f = Matrix::Zero(d.total(), d.total());
  for (int i = 0; i < d.a; ++i)
    f.block(i * d.b, i * d.b, d.b, d.b) =
        filter_diag(i) * Matrix::Identity(d.b, d.b);
  Matrix out = f * op.matrix() * f.adjoint();
  const double tr = out.trace().real();
  if (tr <= 0.0) throw invalid_input("filter produced a zero-trace operator");
  out /= tr;
  return DensityOperator(std::move(out), d, true);
}

DensityOperator filter_to_sigma(const DensityOperator& rho_projected,
                                const CVParams& p, const std::vector<int>& rows) {
  const Dims d = rho_projected.dims();
  if (d.a != d.b || d.a != static_cast<int>(rows.size()))
    throw invalid_input("filter_to_sigma expects a K (x) K state projected onto K rows");
  std::vector<int> sorted = rows;
  std::sort(sorted.begin(), sorted.end());
  Eigen::VectorXd filter(d.a);
  for (int i = 0; i < d.a; ++i) {
    const double an = std::pow(p.a, sorted[i]);
    if (an == 0.0) throw invalid_input("filter amplitude a_n underflowed to zero");
    filter(i) = 1.0 / an;
  }
  return apply_filter_a(rho_projected, filter);
}

DensityOperator build_direct_sum(const DensityOperator& block,
                                 const std::vector<double>& probs,
                                 const std::vector<int>& window_starts_a,
                                 const std::vector<int>& window_starts_b) {
  if (probs.empty()) throw invalid_input("direct sum requires at least one block");
  double total = 0.0;
  for (double pr : probs) {
    if (pr < 0.0) throw invalid_input("block probabilities must be nonnegative");
    total += pr;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw invalid_input("block probabilities must sum to 1");

  const Dims bd = block.dims();
  const int n_blocks = static_cast<int>(probs.size());
  auto starts = [&](const std::vector<int>& given, int width) {
    std::vector<int> s = given;
    if (s.empty())
      for (int i = 0; i < n_blocks; ++i) s.push_back(i * width + 1);
    if (static_cast<int>(s.size()) != n_blocks)
      throw invalid_input("window starts must match the number of blocks");
    for (int i = 0; i < n_blocks; ++i)
      for (int j = i + 1; j < n_blocks; ++j)
        if (std::max(s[i], s[j]) < std::min(s[i], s[j]) + width)
          throw invalid_input("level windows overlap");
    return s;
  };
  const auto sa = starts(window_starts_a, bd.a);
  const auto sb = starts(window_starts_b, bd.b);

  Dims d{0, 0};
  for (int i = 0; i < n_blocks; ++i) {
    d.a = std::max(d.a, sa[i] + bd.a - 1);
    d.b = std::max(d.b, sb[i] + bd.b - 1);
  }
  Matrix out = Matrix::Zero(d.total(), d.total());
  for (int blk = 0; blk < n_blocks; ++blk) {
    const int oa = sa[blk] - 1, ob = sb[blk] - 1;
    for (int i = 0; i < bd.a; ++i)
      for (int j = 0; j < bd.b; ++j)
        for (int k = 0; k < bd.a; ++k)
          for (int l = 0; l < bd.b; ++l)
            out((oa + i) * d.b + (ob + j), (oa + k) * d.b + (ob + l)) =
                probs[static_cast<std::size_t>(blk)] *
                block.matrix()(i * bd.b + j, k * bd.b + l);
  }
  const double tr = out.trace().real();
  out /= tr;  // exact up to rounding when the block is trace-normalized
  return DensityOperator(std::move(out), d, true);
}

}  // namespace bevc::states
