#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "qlearn/povm.hpp"

using namespace qlearn;

namespace {

constexpr double kPi = std::numbers::pi;

double normalized_residual(double pp, double mm, double pm, const EigvecAmplitudes& v, double lambda) {
  const double norm = std::hypot(v.a_plus_component, v.b_branch);
  const double r0 = pp * v.a_plus_component + pm * v.b_branch - lambda * v.a_plus_component;
  const double r1 = pm * v.a_plus_component + mm * v.b_branch - lambda * v.b_branch;
  return std::hypot(r0, r1) / norm;
}

// Dense index a + 2x + 4b of the POVM index x + 2a + 4b.
int dense_index(int povm_index) {
  const int x = povm_index & 1, a = (povm_index >> 1) & 1, b = povm_index >> 2;
  return a + 2 * x + 4 * b;
}

DenseOperator pure_state(const std::array<double, 8>& amplitudes) {
  DenseOperator rho(3);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) rho(i, j) = amplitudes[i] * amplitudes[j];
  }
  return rho;
}

bool is_state(const DenseOperator& rho) {
  return std::abs(rho.trace() - 1.0) < 1e-12 && rho.hermiticity_defect() < 1e-13 &&
         hermitian_eigenvalues(rho).front() > -1e-12;
}

NoiseModel depolarizing(double p) {
  NoiseModel m;
  m.kind = NoiseKind::Depolarizing;
  m.p_depol = p;
  return m;
}

NoiseModel thermal(double t) {
  NoiseModel m;
  m.kind = NoiseKind::Thermal;
  m.t1 = t;
  m.t2 = t;
  return m;
}

bool within_sigma(const SimulationResult& r, double expected, double k) {
  const double se = std::sqrt(expected * (1 - expected) / static_cast<double>(r.shots));
  return std::abs(r.frequency - expected) <= k * se;
}

}  // namespace

TEST_CASE("n = 1 basis change") {
  const ChangeOfBasis cob = n1_change_of_basis();
  const auto& m = cob.matrix;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 8; ++k) dot += m[i][k] * m[j][k];
      CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0));
      CHECK(m[i][j] == doctest::Approx(m[j][i]));
    }
  }
  // All up and all down are untouched.
  CHECK(m[0][0] == doctest::Approx(1.0));
  CHECK(m[7][7] == doctest::Approx(1.0));
  int counts[3] = {0, 0, 0};
  for (OutcomeLabel l : cob.outcomes) ++counts[static_cast<int>(l)];
  CHECK(counts[static_cast<int>(OutcomeLabel::First)] == 2);
  CHECK(counts[static_cast<int>(OutcomeLabel::Second)] == 2);
  CHECK(counts[static_cast<int>(OutcomeLabel::Coin)] == 4);
  CHECK(std::string(to_string(cob.outcomes[3])) == "A");
  CHECK(std::string(to_string(cob.outcomes[2])) == "B");
  CHECK(n1_index(1, 0, 1) == 6);
}

TEST_CASE("rows of the basis change diagonalize Theta with the labelled sign") {
  const ChangeOfBasis cob = n1_change_of_basis();
  for (double theta : {0.4, kPi / 3, 2.0, 3.0}) {
    const auto [alpha, beta] = alpha_beta_dense(1, FixedOverlap{theta});
    const DenseOperator diff = alpha - beta;
    for (int row = 0; row < 8; ++row) {
      std::array<double, 8> v{};
      for (int k = 0; k < 8; ++k) v[dense_index(k)] = cob.matrix[row][k];
      std::array<Complex, 8> tv{};
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) tv[i] += diff(i, j) * v[j];
      }
      double lambda = 0.0;
      for (int i = 0; i < 8; ++i) lambda += v[i] * tv[i].real();
      double residual = 0.0;
      for (int i = 0; i < 8; ++i) residual = std::max(residual, std::abs(tv[i] - lambda * v[i]));
      CAPTURE(row);
      CHECK(residual < 1e-12);
      switch (cob.outcomes[row]) {
        case OutcomeLabel::First: CHECK(lambda > 1e-6); break;
        case OutcomeLabel::Second: CHECK(lambda < -1e-6); break;
        case OutcomeLabel::Coin: CHECK(std::abs(lambda) < 1e-12); break;
      }
    }
  }
}

TEST_CASE("swapping the training qubits exchanges the two guesses") {
  const ChangeOfBasis cob = n1_change_of_basis();
  for (int row = 0; row < 8; ++row) {
    std::array<double, 8> swapped{};
    for (int k = 0; k < 8; ++k) {
      const int x = k & 1, a = (k >> 1) & 1, b = k >> 2;
      swapped[n1_index(b, x, a)] = cob.matrix[row][k];
    }
    // Weight of the swapped row on rows of each label.
    double weight[3] = {0, 0, 0};
    for (int other = 0; other < 8; ++other) {
      double dot = 0.0;
      for (int k = 0; k < 8; ++k) dot += cob.matrix[other][k] * swapped[k];
      weight[static_cast<int>(cob.outcomes[other])] += dot * dot;
    }
    const OutcomeLabel l = cob.outcomes[row];
    const OutcomeLabel target = l == OutcomeLabel::First    ? OutcomeLabel::Second
                                : l == OutcomeLabel::Second ? OutcomeLabel::First
                                                            : OutcomeLabel::Coin;
    CHECK(weight[static_cast<int>(target)] == doctest::Approx(1.0));
  }
}

TEST_CASE("eigenvector amplitudes solve the 2x2 blocks") {
  for (const auto& sc : {PriorScenario{FixedPurities{0.75, 0.5}}, PriorScenario{HardSphere{}},
                         PriorScenario{FixedPurities{1.0, 1.0}}}) {
    for (int n = 1; n <= 8; ++n) {
      for (const SectorKey& k : enumerate_sectors(n)) {
        if (k.case_tag != CaseTag::D) continue;
        const ThetaBlock b = theta_block(k, n, sc);
        const auto lambdas = block_eigenvalues(b, n);
        const auto [plus, minus] = eigenvector_amplitudes(k, n, sc);
        CHECK(normalized_residual(b.lam_pp, b.lam_mm, b.lam_pm, plus, lambdas[0].eigenvalue) < 1e-12);
        CHECK(normalized_residual(b.lam_pp, b.lam_mm, b.lam_pm, minus, lambdas[1].eigenvalue) < 1e-12);
        const double dot = plus.a_plus_component * minus.a_plus_component + plus.b_branch * minus.b_branch;
        CHECK(std::abs(dot) < 1e-12 * std::hypot(plus.a_plus_component, plus.b_branch) *
                                  std::hypot(minus.a_plus_component, minus.b_branch) +
                                  1e-300);
      }
    }
  }
  // Fixed overlap: alpha = Phi e1 e1^T and beta = Phi c c^T with c = (C++, C-+).
  for (int n = 1; n <= 10; ++n) {
    for (const SectorKey& k : enumerate_sectors(n)) {
      if (k.case_tag != CaseTag::D || k.s.twice() != n || k.t.twice() != n) continue;
      const double theta = 1.3;
      const double phi = phi_overlap(k.q, n, theta);
      const double cpp = recoupling_C(k.s, k.t, k.q, Sign::Plus, Sign::Plus);
      const double cmp = recoupling_C(k.s, k.t, k.q, Sign::Minus, Sign::Plus);
      const double pp = phi * (1 - cpp * cpp), mm = -phi * cmp * cmp, pm = -phi * cpp * cmp;
      const auto [plus, minus] = eigenvector_amplitudes(k, n, FixedOverlap{theta});
      const auto expected = overlap_eigenvalues(k.q, n, theta);
      REQUIRE(expected.size() == 2);
      CHECK(normalized_residual(pp, mm, pm, plus, expected[0].eigenvalue) < 1e-12);
      CHECK(normalized_residual(pp, mm, pm, minus, expected[1].eigenvalue) < 1e-12);
    }
  }
  CHECK_THROWS_AS(eigenvector_amplitudes(SectorKey{spin(0), spin(2), spin(1), CaseTag::B}, 2, HardSphere{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(eigenvector_amplitudes(SectorKey{spin(0), spin(2), spin(1), CaseTag::D}, 2, FixedOverlap{1.0}),
                  std::invalid_argument);
}

TEST_CASE("noise channels") {
  std::array<double, 8> amp{};
  amp[3] = std::sqrt(0.5);
  amp[4] = -std::sqrt(0.5);
  const DenseOperator rho = pure_state(amp);

  CHECK((apply_noise(rho, NoiseModel{}) - rho).max_norm() < 1e-15);
  CHECK((apply_noise(rho, depolarizing(0.0)) - rho).max_norm() < 1e-15);
  CHECK((apply_noise(rho, thermal(1e30)) - rho).max_norm() < 1e-12);

  DenseOperator mixed = DenseOperator::identity(3);
  mixed *= Complex{1.0 / 8};
  CHECK((apply_noise(rho, depolarizing(1.0)) - mixed).max_norm() < 1e-15);
  // p_eff = 1 - (1 - p)^layers.
  const NoiseModel d = depolarizing(0.01);
  const double p_eff = 1 - std::pow(0.99, d.layer_count);
  CHECK((apply_noise(rho, d) - (rho * Complex{1 - p_eff} + mixed * Complex{p_eff})).max_norm() < 1e-14);

  for (double t : {5e3, 5e4, 1e6}) {
    NoiseModel m = thermal(t);
    m.t2 = 0.7 * t;
    const auto kraus = thermal_kraus(m);
    DenseOperator sum(1);
    for (const auto& k : kraus) sum += k.adjoint() * k;
    CHECK((sum - DenseOperator::identity(1)).max_norm() < 1e-14);
    CHECK(is_state(apply_noise(rho, m)));
    // Off-diagonal coherence of one qubit decays as exp(-d/T2) per layer.
    DenseOperator plus = DenseOperator::qubit({0.5, 0.5, 0.5, 0.5});
    DenseOperator out(1);
    for (const auto& k : kraus) out += k * plus * k.adjoint();
    CHECK(std::abs(out(0, 1)) == doctest::Approx(0.5 * std::exp(-m.duration_2q / m.t2)));
  }
  // Long relaxation drives every qubit to spin up.
  const DenseOperator relaxed = apply_noise(rho, thermal(10.0));
  CHECK(relaxed(0, 0).real() == doctest::Approx(1.0));
  CHECK(is_state(apply_noise(rho, depolarizing(0.3))));

  CHECK_THROWS_AS(depolarizing(1.5).validate(), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing(-0.1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(thermal(0.0).validate(), std::invalid_argument);
  NoiseModel bad_t2 = thermal(100.0);
  bad_t2.t2 = 300.0;
  CHECK_THROWS_AS(bad_t2.validate(), std::invalid_argument);
  NoiseModel no_layers = depolarizing(0.1);
  no_layers.layer_count = 0;
  CHECK_THROWS_AS(no_layers.validate(), std::invalid_argument);
  CHECK_THROWS_AS(apply_noise(rho * Complex{2.0}, depolarizing(0.1)), std::invalid_argument);
  CHECK_THROWS_AS(apply_noise(DenseOperator::identity(2), NoiseModel{}), std::invalid_argument);
}

TEST_CASE("noiseless simulation matches the closed form") {
  for (double theta : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi}) {
    const SimulationResult r = simulate_misclassification(theta, 40000, NoiseModel{}, 17);
    CHECK(r.shots == 40000);
    CHECK(r.frequency == doctest::Approx(static_cast<double>(r.errors) / r.shots));
    CHECK(within_sigma(r, p_err_n1_closed_form(theta), 3.0));
  }
  CHECK(p_err_n1_closed_form(kPi) == doctest::Approx(0.5));
  CHECK(p_err_n1_closed_form(0.0) == doctest::Approx(0.5 - 1 / (2 * std::sqrt(3.0))));
}

TEST_CASE("simulation is reproducible and independent of threads") {
  const NoiseModel d = depolarizing(0.004);
  const SimulationResult a = simulate_misclassification(1.0, 30000, d, 99, 1);
  const SimulationResult b = simulate_misclassification(1.0, 30000, d, 99, 4);
  const SimulationResult c = simulate_misclassification(1.0, 30000, d, 99, 3);
  CHECK(a.errors == b.errors);
  CHECK(a.errors == c.errors);
  const SimulationResult other = simulate_misclassification(1.0, 30000, d, 100, 1);
  CHECK(other.errors != a.errors);
  CHECK_THROWS_AS(simulate_misclassification(1.0, 0, d, 1), std::invalid_argument);
}

TEST_CASE("noise degrades the error monotonically toward one half") {
  const double theta = kPi / 2;
  const std::int64_t shots = 100000;
  double previous = simulate_misclassification(theta, shots, NoiseModel{}, 5).frequency;
  for (double p : {0.002, 0.01, 0.03}) {
    const double f = simulate_misclassification(theta, shots, depolarizing(p), 5).frequency;
    CHECK(f > previous);
    previous = f;
  }
  CHECK(within_sigma(simulate_misclassification(theta, shots, depolarizing(0.5), 5), 0.5, 3.0));

  previous = simulate_misclassification(theta, shots, NoiseModel{}, 6).frequency;
  for (double t : {2e5, 4e4, 1e4}) {
    const double f = simulate_misclassification(theta, shots, thermal(t), 6).frequency;
    CHECK(f > previous);
    previous = f;
  }
  CHECK(within_sigma(simulate_misclassification(theta, shots, thermal(100.0), 6), 0.5, 3.0));
}
