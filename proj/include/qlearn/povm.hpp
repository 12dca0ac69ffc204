#pragma once

// The optimal measurement: eigenvector amplitudes of the 2x2 blocks, the
// explicit n = 1 basis change for pure templates at fixed overlap, and a
// shot-level simulator of that circuit with channel noise.

#include <array>
#include <cstdint>
#include <utility>

#include "qlearn/oracle.hpp"
#include "qlearn/spectrum.hpp"

namespace qlearn {

/// Unnormalized (A, B) amplitudes on |s+1/2, t; q, m> and |s-1/2, t; q, m>.
struct EigvecAmplitudes {
  double a_plus_component = 0.0;
  double b_branch = 0.0;
};

/// Plus and minus eigenvectors of a case-D block. At fixed overlap only the
/// s = t = n/2 sectors exist and are accepted.
std::pair<EigvecAmplitudes, EigvecAmplitudes> eigenvector_amplitudes(const SectorKey& sector,
                                                                     int n,
                                                                     const PriorScenario& scenario);

enum class OutcomeLabel { First, Second, Coin };

const char* to_string(OutcomeLabel label);

/// Label of each computational outcome, indexed like the matrix rows.
using PovmOutcomeMap = std::array<OutcomeLabel, 8>;

struct ChangeOfBasis {
  std::array<std::array<double, 8>, 8> matrix{};
  PovmOutcomeMap outcomes{};
};

/// The 8x8 rotation for n = 1 and its outcome labels (C,C,B,A,A,B,C,C).
///
/// The row index of the input state is x + 2a + 4b for qubit values a (first
/// training copy), x (test) and b (second training copy), 0 for spin up.
ChangeOfBasis n1_change_of_basis();

/// Basis index of |a, x, b> in the ordering used by n1_change_of_basis.
inline int n1_index(int a, int x, int b) { return x + 2 * a + 4 * b; }

enum class NoiseKind { None, Depolarizing, Thermal };

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  double p_depol = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double duration_1q = 200.0;
  double duration_2q = 800.0;
  int layer_count = 43;

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

/// One 3-qubit density matrix through the noise channel. Depolarizing:
/// (1 - p_eff) rho + p_eff I/8 with p_eff = 1 - (1 - p)^layers. Thermal:
/// amplitude damping and pure dephasing on every qubit, each layer lasting
/// duration_2q, repeated layer_count times.
DenseOperator apply_noise(const DenseOperator& rho, const NoiseModel& noise);

/// Kraus operators of one thermal layer on one qubit.
std::vector<DenseOperator> thermal_kraus(const NoiseModel& noise);

struct SimulationResult {
  std::int64_t shots = 0;
  std::int64_t errors = 0;
  double frequency = 0.0;
  double stderr_ = 0.0;
};

/// Shots are processed in fixed blocks, each with its own generator seeded
/// from (seed, block index), so the result does not depend on threads.
SimulationResult simulate_misclassification(double theta, std::int64_t shots,
                                            const NoiseModel& noise, std::uint64_t seed,
                                            int threads = 0);

/// 1/2 - (1 + cos theta) / (4 sqrt 3).
double p_err_n1_closed_form(double theta);

}  // namespace qlearn
