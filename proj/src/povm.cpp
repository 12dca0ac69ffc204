#include "qlearn/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace qlearn {

namespace {

constexpr std::int64_t kShotsPerBlock = 4096;

struct Block2 {
  double pp = 0.0;
  double mm = 0.0;
  double pm = 0.0;
};

// At fixed overlap alpha = Phi |s+1/2, t><.| and beta = Phi |s, t+1/2><.| on
// the s = t = n/2 sector.
Block2 overlap_block(const SectorKey& sector, int n, double theta) {
  const RecouplingRow c = recoupling_row(sector.s, sector.t, sector.q);
  const double phi = phi_overlap(sector.q, n, theta);
  return Block2{phi * (1.0 - c.c_pp * c.c_pp), -phi * c.c_mp * c.c_mp, -phi * c.c_pp * c.c_mp};
}

DenseOperator embed(const DenseOperator& op, int qubit, int qubits) {
  return kron(kron(DenseOperator::identity(qubit), op),
              DenseOperator::identity(qubits - qubit - 1));
}

void check_density(const DenseOperator& rho) {
  if (rho.qubits() != 3) throw std::invalid_argument("apply_noise: expected a 3-qubit state");
  if (rho.hermiticity_defect() > 1e-10 || std::abs(rho.trace() - 1.0) > 1e-10) {
    throw std::invalid_argument("apply_noise: not a density matrix");
  }
  const std::vector<double> ev = hermitian_eigenvalues(rho);
  if (ev.front() < -1e-10) throw std::invalid_argument("apply_noise: not positive semidefinite");
}

DenseOperator channel(const DenseOperator& rho, const NoiseModel& noise) {
  switch (noise.kind) {
    case NoiseKind::None: return rho;
    case NoiseKind::Depolarizing: {
      const double p_eff = 1.0 - std::pow(1.0 - noise.p_depol, noise.layer_count);
      DenseOperator out = rho * Complex{1.0 - p_eff};
      for (int i = 0; i < out.dim(); ++i) out(i, i) += p_eff / out.dim();
      return out;
    }
    case NoiseKind::Thermal: {
      const std::vector<DenseOperator> kraus = thermal_kraus(noise);
      std::vector<std::vector<std::pair<DenseOperator, DenseOperator>>> full(rho.qubits());
      for (int q = 0; q < rho.qubits(); ++q) {
        for (const DenseOperator& k : kraus) {
          DenseOperator e = embed(k, q, rho.qubits());
          full[q].emplace_back(e, e.adjoint());
        }
      }
      DenseOperator cur = rho;
      for (int layer = 0; layer < noise.layer_count; ++layer) {
        for (int q = 0; q < rho.qubits(); ++q) {
          DenseOperator next(rho.qubits());
          for (const auto& [k, kd] : full[q]) next += k * cur * kd;
          cur = std::move(next);
        }
      }
      return cur;
    }
  }
  return rho;
}

// Outcome probabilities as a real-linear map of the pure state's outer
// product: prob[k] = sum_{ij} D[k][i*8+j] phi_i conj(phi_j).
using DiagonalMap = std::array<std::array<Complex, 64>, 8>;

DiagonalMap diagonal_map(const NoiseModel& noise) {
  DiagonalMap d{};
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      DenseOperator e(3);
      e(i, j) = 1.0;
      const DenseOperator out = channel(e, noise);
      for (int k = 0; k < 8; ++k) d[k][i * 8 + j] = out(k, k);
    }
  }
  return d;
}

}  // namespace

const char* to_string(OutcomeLabel label) {
  switch (label) {
    case OutcomeLabel::First: return "A";
    case OutcomeLabel::Second: return "B";
    case OutcomeLabel::Coin: return "C";
  }
  return "?";
}

std::pair<EigvecAmplitudes, EigvecAmplitudes> eigenvector_amplitudes(
    const SectorKey& sector, int n, const PriorScenario& scenario) {
  if (sector.case_tag != CaseTag::D) {
    throw std::invalid_argument("eigenvector_amplitudes: only case-D sectors have 2x2 blocks");
  }
  Block2 b;
  if (const auto* fo = std::get_if<FixedOverlap>(&scenario)) {
    if (sector.s.twice() != n || sector.t.twice() != n) {
      throw std::invalid_argument("eigenvector_amplitudes: fixed overlap lives on s = t = n/2");
    }
    b = overlap_block(sector, n, fo->theta);
  } else if (const auto* fd = std::get_if<FixedOverlapDim>(&scenario)) {
    if (sector.s.twice() != n || sector.t.twice() != n) {
      throw std::invalid_argument("eigenvector_amplitudes: fixed overlap lives on s = t = n/2");
    }
    b = overlap_block(sector, n, fd->theta);
  } else {
    const ThetaBlock t = theta_block(sector, n, scenario);
    b = Block2{t.lam_pp, t.lam_mm, t.lam_pm};
  }
  const double half = 0.5 * (b.mm - b.pp);
  const double root = std::hypot(half, b.pm);
  const double size = std::max({std::abs(b.pp), std::abs(b.mm), std::abs(b.pm)});
  if (std::abs(b.pm) <= 1e-15 * size || size == 0.0) {
    // Already diagonal: the eigenvectors are the basis vectors.
    const EigvecAmplitudes e_plus{1.0, 0.0};
    const EigvecAmplitudes e_minus{0.0, 1.0};
    if (b.pp >= b.mm) return {e_plus, e_minus};
    return {e_minus, e_plus};
  }
  return {EigvecAmplitudes{b.pm, half + root}, EigvecAmplitudes{b.pm, half - root}};
}

ChangeOfBasis n1_change_of_basis() {
  const double r3 = 1.0 / std::sqrt(3.0);
  const double s3 = std::sqrt(3.0);
  const double m = (-3.0 - s3) / 6.0;
  const double p = (3.0 - s3) / 6.0;
  const double u = 1.0 / (3.0 + s3);
  const double v = 1.0 / (-3.0 + s3);
  ChangeOfBasis out;
  out.matrix = {{
      {1, 0, 0, 0, 0, 0, 0, 0},
      {0, r3, r3, 0, r3, 0, 0, 0},
      {0, r3, m, 0, p, 0, 0, 0},
      {0, 0, 0, m, 0, u, r3, 0},
      {0, r3, p, 0, m, 0, 0, 0},
      {0, 0, 0, p, 0, v, r3, 0},
      {0, 0, 0, r3, 0, r3, r3, 0},
      {0, 0, 0, 0, 0, 0, 0, 1},
  }};
  using L = OutcomeLabel;
  out.outcomes = {L::Coin, L::Coin, L::Second, L::First, L::First, L::Second, L::Coin, L::Coin};
  return out;
}

void NoiseModel::validate() const {
  if (layer_count < 1) throw std::invalid_argument("noise: layer_count must be positive");
  if (kind == NoiseKind::Depolarizing && !(p_depol >= 0.0 && p_depol <= 1.0)) {
    throw std::invalid_argument("noise: depolarizing probability must lie in [0, 1]");
  }
  if (kind == NoiseKind::Thermal) {
    if (!(t1 > 0.0) || !(t2 > 0.0)) throw std::invalid_argument("noise: T1, T2 must be positive");
    if (t2 > 2.0 * t1) throw std::invalid_argument("noise: T2 must not exceed 2 T1");
    if (!(duration_1q >= 0.0) || !(duration_2q >= 0.0)) {
      throw std::invalid_argument("noise: gate durations must be non-negative");
    }
  }
}

std::vector<DenseOperator> thermal_kraus(const NoiseModel& noise) {
  const double d = noise.duration_2q;
  const double gamma = -std::expm1(-d / noise.t1);
  // Amplitude damping alone leaves coherence exp(-d / 2T1); pure dephasing
  // supplies the rest of exp(-d / T2).
  const double lambda = std::exp(-d / noise.t2 + d / (2.0 * noise.t1));
  const std::vector<DenseOperator> ad = {
      DenseOperator::qubit({1.0, 0.0, 0.0, std::sqrt(1.0 - gamma)}),
      DenseOperator::qubit({0.0, std::sqrt(gamma), 0.0, 0.0})};
  const std::vector<DenseOperator> pd = {
      DenseOperator::qubit({1.0, 0.0, 0.0, lambda}),
      DenseOperator::qubit({0.0, 0.0, 0.0, std::sqrt(std::max(0.0, 1.0 - lambda * lambda))})};
  std::vector<DenseOperator> out;
  for (const auto& a : ad) {
    for (const auto& p : pd) out.push_back(p * a);
  }
  return out;
}

DenseOperator apply_noise(const DenseOperator& rho, const NoiseModel& noise) {
  noise.validate();
  check_density(rho);
  return channel(rho, noise);
}

double p_err_n1_closed_form(double theta) {
  return 0.5 - (1.0 + std::cos(theta)) / (4.0 * std::sqrt(3.0));
}

SimulationResult simulate_misclassification(double theta, std::int64_t shots,
                                            const NoiseModel& noise, std::uint64_t seed,
                                            int threads) {
  if (shots < 1) throw std::invalid_argument("simulate: shots must be positive");
  noise.validate();
  const ChangeOfBasis basis = n1_change_of_basis();
  const bool noisy = noise.kind != NoiseKind::None;
  const DiagonalMap diag = noisy ? diagonal_map(noise) : DiagonalMap{};
  const DenseOperator u0 = overlap_rotation(theta);

  auto run_block = [&](std::int64_t block) {
    const std::int64_t begin = block * kShotsPerBlock;
    const std::int64_t end = std::min(shots, begin + kShotsPerBlock);
    std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(block),
                       static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(sseq);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::int64_t errors = 0;
    for (std::int64_t shot = begin; shot < end; ++shot) {
      const bool first = uniform(rng) < 0.5;
      const DenseOperator frame = haar_su2(rng);
      const DenseOperator rotated = frame * u0;
      const Complex t1[2] = {frame(0, 0), frame(1, 0)};
      const Complex t2[2] = {rotated(0, 0), rotated(1, 0)};
      const Complex* tx = first ? t1 : t2;
      std::array<Complex, 8> psi{};
      for (int a = 0; a < 2; ++a) {
        for (int x = 0; x < 2; ++x) {
          for (int b = 0; b < 2; ++b) psi[n1_index(a, x, b)] = t1[a] * tx[x] * t2[b];
        }
      }
      std::array<Complex, 8> phi{};
      for (int k = 0; k < 8; ++k) {
        for (int i = 0; i < 8; ++i) phi[k] += basis.matrix[k][i] * psi[i];
      }
      std::array<double, 8> prob{};
      if (noisy) {
        for (int k = 0; k < 8; ++k) {
          Complex acc = 0.0;
          for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) acc += diag[k][i * 8 + j] * phi[i] * std::conj(phi[j]);
          }
          prob[k] = std::max(0.0, acc.real());
        }
      } else {
        for (int k = 0; k < 8; ++k) prob[k] = std::norm(phi[k]);
      }
      double total = 0.0;
      for (double pk : prob) total += pk;
      double pick = uniform(rng) * total;
      int outcome = 7;
      for (int k = 0; k < 8; ++k) {
        if (pick < prob[k]) {
          outcome = k;
          break;
        }
        pick -= prob[k];
      }
      bool guess_first = false;
      switch (basis.outcomes[outcome]) {
        case OutcomeLabel::First: guess_first = true; break;
        case OutcomeLabel::Second: guess_first = false; break;
        case OutcomeLabel::Coin: guess_first = uniform(rng) < 0.5; break;
      }
      if (guess_first != first) ++errors;
    }
    return errors;
  };

  const std::int64_t blocks = (shots + kShotsPerBlock - 1) / kShotsPerBlock;
  std::vector<std::int64_t> per_block(static_cast<std::size_t>(blocks), 0);
  const int workers = static_cast<int>(std::max<std::int64_t>(
      1, std::min<std::int64_t>(threads > 0 ? threads : default_thread_count(), blocks)));
  if (workers == 1) {
    for (std::int64_t b = 0; b < blocks; ++b) per_block[b] = run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t b = w; b < blocks; b += workers) per_block[b] = run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  SimulationResult result;
  result.shots = shots;
  for (std::int64_t e : per_block) result.errors += e;
  result.frequency = static_cast<double>(result.errors) / static_cast<double>(shots);
  result.stderr_ =
      std::sqrt(result.frequency * (1.0 - result.frequency) / static_cast<double>(shots));
  return result;
}

}  // namespace qlearn
