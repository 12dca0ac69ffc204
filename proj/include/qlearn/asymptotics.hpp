#pragma once

// Closed-form large-n expansions of the minimal error, the averaged
// Helstrom baselines they converge to, and central moments of the two
// distributions used to build the fixed-overlap expansion.

#include <cstdint>
#include <optional>
#include <string>

#include "qlearn/priors.hpp"

namespace qlearn {

/// Expansion evaluated at a given n: leading + first_order + second_order,
/// each term already including its power of 1/n.
struct AsymptoticEstimate {
  int n = 0;
  double leading = 0.0;
  double order_1_over_n = 0.0;
  std::optional<double> order_1_over_n2;
  std::string valid_region_note;

  double value() const { return leading + order_1_over_n + order_1_over_n2.value_or(0.0); }
};

/// Average Helstrom error (1/2 - 1/4 E||rho1 - rho2||_1) under the prior.
/// FixedOverlapDim gives the baseline averaged over Haar-random overlaps in
/// dimension d.
double helstrom_avg(const PriorScenario& scenario);

/// Pure-state Helstrom error at fixed overlap, 1/2 (1 - |cos(theta/2)|).
double helstrom_pure(double theta);

/// Exact rational p/q.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Hard-sphere Helstrom average, integrated exactly over the ball measures.
Rational helstrom_hard_sphere_rational();

/// Requires r1, r2 in (0, 1].
AsymptoticEstimate p_asym_fixed_purity(int n, double r1, double r2);

/// 17/70 + 18/(35 n).
AsymptoticEstimate p_asym_hard_sphere(int n);

/// Three-term expansion, theta in [0, pi). Adds a warning to the note when
/// n (pi - theta) < 10.
AsymptoticEstimate p_asym_overlap(int n, double theta);

/// Near-orthogonal form theta^2/16 + 1/(4n) - (1 - theta^2/4)/(8 n^2).
AsymptoticEstimate p_asym_overlap_small_angle(int n, double theta);

/// Overlap-averaged expansion for Haar-random pure templates in dimension d.
AsymptoticEstimate p_asym_dimension_avg(int n, int d);

/// Estimate matching the scenario, or nullopt where no expansion applies.
std::optional<AsymptoticEstimate> p_asym(int n, const PriorScenario& scenario);

enum class MomentDistribution {
  /// s = 2h/n, n/2 + h ~ Binomial(n, (1+r)/2); parameter is r.
  SDist,
  /// q ~ squared Clebsch-Gordan distribution at fixed h; parameter is h.
  QDist,
};

struct CentralMoments {
  double mu1 = 0.0;  ///< mean
  double mu2 = 0.0;
  double mu3 = 0.0;
  double mu4 = 0.0;
};

/// Exact closed forms (polynomial for SDist, Gamma-function for QDist).
CentralMoments moments_closed_form(MomentDistribution which, int n, double parameter);

/// The closed forms exactly as originally typeset, kept to report where
/// they disagree with the exact moments.
CentralMoments moments_as_printed(MomentDistribution which, int n, double parameter);

/// Large-n expansions of the QDist moments in s = 2h/n.
CentralMoments qdist_moments_expansion(int n, double s);

}  // namespace qlearn
