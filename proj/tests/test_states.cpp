#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>
#include <vector>

#include "bevc/hilbert.hpp"
#include "bevc/states.hpp"
#include "support/test_helpers.hpp"

using namespace bevc;
using hilbert::BasisIndex;
using hilbert::DensityOperator;
using states::AlphaFamily;
using states::CVParams;

TEST_CASE("CVParams validation names the violated invariant") {
  CHECK_THROWS_AS(CVParams(0.8, 0.5, 8), invalid_input);
  CHECK_THROWS_AS(CVParams(0.0, 0.5, 8), invalid_input);
  CHECK_THROWS_AS(CVParams(0.5, 1.0, 8), invalid_input);
  CHECK_THROWS_AS(CVParams(0.3, 0.6, 1), invalid_input);
  const auto p = CVParams::from_rates(std::log(2.0), std::log(1.25), 8);
  CHECK(p.a == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.c == doctest::Approx(0.8).epsilon(1e-15));
  CHECK_THROWS_AS(CVParams::from_rates(0.2, 0.3, 8), invalid_input);
}

TEST_CASE("build_psi places a^n on the diagonal pairs") {
  SUBCASE("smallest truncation") {
    // N=2 is the smallest legal truncation; the N=1 content is the first entry
    const auto psi = states::build_psi(CVParams(0.5, 0.8, 2));
    CHECK(psi.amplitudes()(BasisIndex{1, 1}.flat({2, 2})) == Complex(0.5, 0.0));
    CHECK(psi.amplitudes()(BasisIndex{2, 2}.flat({2, 2})) == Complex(0.25, 0.0));
    CHECK(psi.norm_sq() == doctest::Approx(0.25 + 0.0625).epsilon(1e-15));
  }
  SUBCASE("truncated norm approaches a^2/(1-a^2) with a geometric tail") {
    const double limit = 1.0 / 3.0;  // a = 0.5
    for (int n : {8, 16, 32}) {
      const auto psi = states::build_psi(CVParams(0.5, 0.8, n));
      const double tail = std::pow(0.25, n + 1) / (1.0 - 0.25);
      CHECK(psi.norm_sq() ==
            doctest::Approx(testing::geometric_sum(0.25, 1, n)).epsilon(1e-14));
      // the deficit is the geometric tail, up to summation rounding
      CHECK(std::abs(limit - psi.norm_sq()) <= tail + 1e-15);
    }
  }
  SUBCASE("schmidt rank equals the truncation") {
    for (int n : {2, 5, 9})
      CHECK(hilbert::schmidt(states::build_psi(CVParams(0.5, 0.8, n))).rank() == n);
  }
}

TEST_CASE("build_psi_mn matches the closed-form amplitudes") {
  const CVParams p(0.5, 0.8, 4);
  const auto v = states::build_psi_mn(1, 2, p);
  CHECK(v.amplitudes()(BasisIndex{1, 2}.flat({4, 4})).real() ==
        doctest::Approx(0.32).epsilon(1e-15));
  CHECK(v.amplitudes()(BasisIndex{2, 1}.flat({4, 4})).real() ==
        doctest::Approx(0.390625).epsilon(1e-15));
  // norm^2 = c^{2m} a^{2n} + a^{2m} c^{-2m}
  for (int n = 1; n <= 3; ++n)
    for (int m = n + 1; m <= 4; ++m) {
      const auto w = states::build_psi_mn(n, m, p);
      const double expected = std::pow(0.8, 2 * m) * std::pow(0.5, 2 * n) +
                              std::pow(0.5, 2 * m) / std::pow(0.8, 2 * m);
      CHECK(w.norm_sq() == doctest::Approx(expected).epsilon(1e-13));
      CHECK(hilbert::schmidt(w).rank() == 2);
    }
  CHECK_THROWS_AS(states::build_psi_mn(2, 2, p), invalid_input);
  CHECK_THROWS_AS(states::build_psi_mn(3, 1, p), invalid_input);
}

TEST_CASE("build_rho is trace-normalized and PT-invariant on a parameter grid") {
  for (double a : {0.3, 0.5})
    for (double c : {0.6, 0.8})
      for (int n : {4, 8}) {
        const auto rho = states::build_rho(CVParams(a, c, n));
        CHECK(std::abs(rho.trace_real() - 1.0) <= 1e-12);
        const auto pt = hilbert::partial_transpose(rho);
        CHECK((rho.matrix() - pt.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
      }
}

TEST_CASE("rho at N=2 is the rank-2 mixture of Psi and Psi_21") {
  const CVParams p(0.5, 0.8, 2);
  const auto rho = states::build_rho(p);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  int nonzero = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-12) ++nonzero;
  CHECK(nonzero == 2);
}

TEST_CASE("rho eigenvalues are the component norms over the normalization") {
  // Psi and the Psi_mn are mutually orthogonal, so they are the
  // eigenvectors and the spectrum is directly checkable from the norms.
  const CVParams p(0.4, 0.7, 6);
  const auto rho = states::build_rho(p);
  const auto nb = states::normalization(p);
  std::vector<double> expected{states::build_psi(p).norm_sq() / nb.a_total};
  for (int n = 1; n <= 6; ++n)
    for (int m = n + 1; m <= 6; ++m)
      expected.push_back(states::build_psi_mn(n, m, p).norm_sq() / nb.a_total);
  while (static_cast<int>(expected.size()) < rho.dims().total())
    expected.push_back(0.0);
  std::sort(expected.begin(), expected.end());
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    CHECK(es.eigenvalues()(i) ==
          doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("general sequences reproduce the geometric family and reject bad input") {
  const CVParams p(0.5, 0.8, 4);
  Vector a(4), c(4);
  for (int n = 1; n <= 4; ++n) {
    a(n - 1) = std::pow(0.5, n);
    c(n - 1) = std::pow(0.8, n);
  }
  const states::Sequences s(a, c);
  CHECK((states::build_rho(s).matrix() - states::build_rho(p).matrix())
            .cwiseAbs()
            .maxCoeff() <= 1e-14);
  Vector bad_c(4);
  bad_c << 0.8, 0.9, 0.5, 0.4;  // |c_n| must strictly decrease
  CHECK_THROWS_AS(states::Sequences(a, bad_c), invalid_input);
}

TEST_CASE("normalization bookkeeping") {
  const CVParams p(0.5, 0.8, 40);
  const auto nb = states::normalization(p);

  SUBCASE("psi norm approaches 1/3") {
    CHECK(nb.psi_norm_sq == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(nb.psi_norm_sq_limit == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("A = psi_norm_sq + pair_sum") {
    CHECK(nb.a_total == doctest::Approx(nb.psi_norm_sq + nb.pair_sum).epsilon(1e-15));
  }
  SUBCASE("pair sum matches the nested geometric summation oracle") {
    // first piece sum_{m} c^{2m} sum_{n<m} a^{2n} -> a^2 c^4 / ((1-c^2)(1-a^2c^2))
    double first = 0.0, second = 0.0;
    for (int m = 2; m <= 40; ++m) {
      first += std::pow(0.64, m) * testing::geometric_sum(0.25, 1, m - 1);
      second += (m - 1) * std::pow(0.25 / 0.64, m);
    }
    CHECK(nb.pair_sum == doctest::Approx(first + second).epsilon(1e-12));
    const double first_limit = 0.25 * std::pow(0.8, 4) / ((1 - 0.64) * (1 - 0.16));
    const double second_limit = 0.0625 / ((0.64 - 0.25) * (0.64 - 0.25));
    CHECK(first == doctest::Approx(first_limit).epsilon(1e-8));
    CHECK(nb.pair_sum_limit ==
          doctest::Approx(first_limit + second_limit).epsilon(1e-14));
  }
  SUBCASE("tail bound is a valid majorant, decreasing in N") {
    double prev_tail = 1e300;
    double prev_a = 0.0;
    for (int n : {8, 12, 16, 24, 40, 48}) {
      const auto nbn = states::normalization(CVParams(0.5, 0.8, n));
      CHECK(nbn.tail_bound >= 0.0);
      CHECK(nbn.tail_bound < prev_tail);
      CHECK(nbn.a_total >= prev_a);  // monotone nondecreasing in N
      prev_tail = nbn.tail_bound;
      prev_a = nbn.a_total;
    }
    // Cauchy within the majorant: A_60 - A_N <= tail_bound(N)
    const double a60 = states::normalization(CVParams(0.5, 0.8, 60)).a_total;
    for (int n : {8, 16, 40}) {
      const auto nbn = states::normalization(CVParams(0.5, 0.8, n));
      CHECK(a60 - nbn.a_total <= nbn.tail_bound * (1.0 + 1e-12));
      CHECK(a60 - nbn.a_total >= 0.0);
    }
  }
  SUBCASE("paper closed form is reported alongside, never asserted equal") {
    REQUIRE(nb.paper_closed_form.has_value());
    // verbatim evaluation of a^4c^4(1-c^2)^-1(1-a^2c^2)^-1 + a^6(c^2-a^2)^-1(c^2-a^4)^-1
    const double expect = 0.0625 * 0.4096 / (0.36 * 0.84) +
                          0.015625 / (0.39 * (0.64 - 0.0625));
    CHECK(*nb.paper_closed_form == doctest::Approx(expect).epsilon(1e-12));
    CHECK(!nb.discrepancy_note.empty());
    // the documented discrepancy: the values genuinely differ
    CHECK(std::abs(*nb.paper_closed_form - nb.pair_sum_limit) > 0.1);
  }
}

TEST_CASE("sigma trace matches the closed formula") {
  CHECK(states::sigma_unnormalized_trace(AlphaFamily::choi()) ==
        doctest::Approx(15.75).epsilon(1e-15));
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = 2 + int(rng() % 5);
    std::vector<double> alphas;
    for (int m = 2; m <= k; ++m) alphas.push_back(0.2 + 3.0 * testing::uniform01(rng));
    const AlphaFamily f(k, alphas);
    // loop oracle over the component norms
    double expect = double(k);
    for (int m = 2; m <= k; ++m)
      for (int n = 1; n < m; ++n)
        expect += f.alpha(m) * f.alpha(m) + 1.0 / (f.alpha(m) * f.alpha(m));
    CHECK(states::sigma_unnormalized_trace(f) == doctest::Approx(expect).epsilon(1e-13));
    const auto sigma = states::build_sigma(f);
    CHECK(std::abs(sigma.trace_real() - 1.0) <= 1e-12);
    // PT-invariant for every positive alpha draw
    const auto pt = hilbert::partial_transpose(sigma);
    CHECK((sigma.matrix() - pt.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("sigma at K=3, alphas (2,2) is the normalized Choi matrix") {
  // hand-computed from |Phi><Phi| + sum |Phi_mn><Phi_mn| with alpha = 2
  const double t = 15.75;
  Matrix expect = Matrix::Zero(9, 9);
  for (int i : {0, 4, 8})
    for (int j : {0, 4, 8}) expect(i, j) = 1.0;
  expect(1, 1) = 4.0;  expect(3, 3) = 0.25;  expect(1, 3) = expect(3, 1) = 1.0;
  expect(2, 2) = 4.0;  expect(6, 6) = 0.25;  expect(2, 6) = expect(6, 2) = 1.0;
  expect(5, 5) = 4.0;  expect(7, 7) = 0.25;  expect(5, 7) = expect(7, 5) = 1.0;
  expect /= t;
  const auto sigma = states::build_sigma(AlphaFamily::choi());
  CHECK((sigma.matrix() - expect).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("alpha family validation") {
  CHECK_THROWS_AS(AlphaFamily(1, {}), invalid_input);
  CHECK_THROWS_AS(AlphaFamily(3, {2.0}), invalid_input);
  CHECK_THROWS_AS(AlphaFamily(3, {2.0, -1.0}), invalid_input);
  CHECK_THROWS_AS(AlphaFamily(3, {2.0, 0.0}), invalid_input);
}

TEST_CASE("filter_to_sigma reaches the predicted Sigma family") {
  const CVParams p(0.5, 0.8, 12);
  const auto rho = states::build_rho(p);

  SUBCASE("rows {1,2,3} give alphas (0.64, 0.512)") {
    const std::vector<int> rows{1, 2, 3};
    const auto projected = hilbert::project_local(rho, rows, rows);
    const auto filtered = states::filter_to_sigma(projected, p, rows);
    const auto expect = states::build_sigma(AlphaFamily(3, {0.64, 0.512}));
    CHECK((filtered.matrix() - expect.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("rows {1,2} give K=2 with alpha_2 = c^2") {
    const std::vector<int> rows{1, 2};
    const auto projected = hilbert::project_local(rho, rows, rows);
    const auto filtered = states::filter_to_sigma(projected, p, rows);
    const auto expect = states::build_sigma(AlphaFamily(2, {0.64}));
    CHECK((filtered.matrix() - expect.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("a unit filter is the identity operation") {
    const auto sigma = states::build_sigma(AlphaFamily::choi());
    const auto out = states::apply_filter_a(sigma, Eigen::VectorXd::Ones(3));
    CHECK((out.matrix() - sigma.matrix()).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("filter composition law holds for every row subset up to size 6") {
  const int n_levels = 12;
  const CVParams p(0.5, 0.8, n_levels);
  const auto rho = states::build_rho(p);
  int checked = 0;
  for (int size = 2; size <= 6; ++size) {
    std::vector<int> rows(size);
    for (int i = 0; i < size; ++i) rows[i] = i + 1;
    while (true) {
      const auto projected = hilbert::project_local(rho, rows, rows);
      const auto filtered = states::filter_to_sigma(projected, p, rows);
      std::vector<double> alphas;
      for (int i = 1; i < size; ++i) alphas.push_back(std::pow(p.c, rows[i]));
      const auto expect = states::build_sigma(AlphaFamily(size, alphas));
      REQUIRE((filtered.matrix() - expect.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
      ++checked;
      int i = size - 1;
      while (i >= 0 && rows[i] == n_levels - (size - 1 - i)) --i;
      if (i < 0) break;
      ++rows[i];
      for (int j = i + 1; j < size; ++j) rows[j] = rows[j - 1] + 1;
    }
  }
  CHECK(checked == 66 + 220 + 495 + 792 + 924);
}

TEST_CASE("direct sums are locally orthogonal and PPT when the block is") {
  const auto block = states::build_sigma(AlphaFamily::choi());

  SUBCASE("single block is the block itself") {
    const auto sum = states::build_direct_sum(block, {1.0});
    CHECK((sum.matrix() - block.matrix()).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("two equal-weight copies") {
    const auto sum = states::build_direct_sum(block, {0.5, 0.5});
    CHECK(sum.dims() == Dims{6, 6});
    CHECK(std::abs(sum.trace_real() - 1.0) <= 1e-12);

    // A-side marginals of the two window restrictions have disjoint supports
    const auto first = hilbert::project_local(sum, {1, 2, 3, 4, 5, 6}, {1, 2, 3});
    const auto second = hilbert::project_local(sum, {1, 2, 3, 4, 5, 6}, {4, 5, 6});
    const Matrix ma1 = hilbert::partial_trace_b(first);
    const Matrix ma2 = hilbert::partial_trace_b(second);
    CHECK((ma1 * ma2).cwiseAbs().maxCoeff() <= 1e-12);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(ma1(i + 3, i + 3)) <= 1e-14);  // block 1 lives on levels 1..3
      CHECK(std::abs(ma2(i, i)) <= 1e-14);          // block 2 lives on levels 4..6
    }

    // block PPT => direct sum PPT (PT acts blockwise)
    const auto pt = hilbert::partial_transpose(sum);
    CHECK(hilbert::min_eigenvalue(pt) >= -1e-10);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(states::build_direct_sum(block, {0.5, 0.4}), invalid_input);
    CHECK_THROWS_AS(states::build_direct_sum(block, {0.5, -0.5, 1.0}), invalid_input);
    CHECK_THROWS_AS(states::build_direct_sum(block, {0.5, 0.5}, {1, 2}, {1, 4}),
                    invalid_input);  // A windows overlap
    const auto ok = states::build_direct_sum(block, {0.5, 0.5}, {1, 4}, {1, 4});
    CHECK(ok.dims() == Dims{6, 6});
  }
}
