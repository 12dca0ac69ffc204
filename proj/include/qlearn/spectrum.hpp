#pragma once

// Exact minimal error of the optimal learning machine.
//
// Theta = alpha - beta is block diagonal over (s, t, q) sectors: 1x1 for
// cases A, B, C and 2x2 for case D. Each block carries a common prefactor
// f_s f_t (the "scale") and is stored rescaled by it. The minimal error is
// 1/2 - 1/2 * (sum of positive eigenvalues weighted by multiplicity).

#include <optional>
#include <vector>

#include "qlearn/angular.hpp"
#include "qlearn/asymptotics.hpp"
#include "qlearn/priors.hpp"

namespace qlearn {

struct ThetaBlock {
  SectorKey sector;
  LogWeight scale;  ///< f_s^{(n)}(r1) f_t^{(n)}(r2)
  double lam_pp = 0.0;
  double lam_mm = 0.0;
  double lam_pm = 0.0;
  bool is_2x2 = false;
};

enum class Branch { Single, Plus, Minus };

const char* to_string(Branch branch);

struct SpectrumEntry {
  SectorKey sector;
  Branch branch = Branch::Single;
  double eigenvalue = 0.0;  ///< rescaled Lambda
  BigCount multiplicity = 0;
  LogWeight scale;

  /// eigenvalue * scale * multiplicity
  double weighted() const;
};

struct ErrorReport {
  int n = 0;
  PriorScenario scenario;
  double p_exact = 0.5;
  std::optional<double> p_asymptotic;
  double helstrom = 0.5;
  double excess_risk = 0.0;
};

struct EngineOptions {
  /// Drop (s, t) pairs whose weight is below truncation_epsilon relative to
  /// the largest; only applied when n > truncation_min_n.
  bool truncate = false;
  double truncation_epsilon = 1e-18;
  int truncation_min_n = 200;
  /// Weighted eigenvalues below this fraction of the largest are treated
  /// as exact zeros.
  double zero_tolerance = 1e-14;
  /// 0 picks the QLEARN_THREADS environment variable, else 1.
  int threads = 0;
};

/// Largest n accepted by spectrum_report (exact multiplicities).
inline constexpr int kSpectrumReportCap = 60;

/// Rescaled block of Theta for a FixedPurities or HardSphere sector.
ThetaBlock theta_block(const SectorKey& sector, int n, const PriorScenario& scenario);

/// Same block assembled from the general 2x2 expression in every case,
/// without the case shortcuts. Used to cross-check theta_block.
ThetaBlock theta_block_general(const SectorKey& sector, int n, const PriorScenario& scenario);

/// Eigenvalues of one block, plus branch first for 2x2 blocks.
std::vector<SpectrumEntry> block_eigenvalues(const ThetaBlock& block, int n);

/// Lambda(+/-) as a +/- b with a the mean of the diagonal and
/// b = 1/2 sqrt((gs + gt)^2 - 4 gs gt C_{++}^2), g_j = G_j / f_j.
/// Only a cross-check for the direct diagonalization.
std::pair<double, double> case_d_eigenvalues_ab(const SectorKey& sector, int n,
                                                const PriorScenario& scenario);

/// Eigenvalue of alpha on |(n+1)/2, n/2; q, m> for pure templates at
/// fixed angle theta.
double phi_overlap(SpinLabel q, int n, double theta);

/// +/- Phi |C_{+-}| pair for the s = t = n/2 sector; a single zero
/// eigenvalue at q = n + 1/2.
std::vector<SpectrumEntry> overlap_eigenvalues(SpinLabel q, int n, double theta);

/// Full error report; FixedOverlapDim uses the qubit spectrum.
ErrorReport p_err_min(int n, const PriorScenario& scenario, const EngineOptions& options = {});

/// Exact minimal error only.
double p_err_exact(int n, const PriorScenario& scenario, const EngineOptions& options = {});

/// Every spectrum entry (zeros included), ordered by (s, t, q, branch).
/// Throws std::domain_error when n > kSpectrumReportCap.
std::vector<SpectrumEntry> spectrum_report(int n, const PriorScenario& scenario);

/// p_exact - helstrom baseline for the scenario.
double excess_risk(int n, const PriorScenario& scenario, const EngineOptions& options = {});

/// Number of worker threads requested by the QLEARN_THREADS environment
/// variable (1 when unset or invalid).
int default_thread_count();

}  // namespace qlearn
