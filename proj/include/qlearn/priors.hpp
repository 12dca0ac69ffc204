#pragma once

// Scalar weights induced by the priors on the two templates.
//
// For a single template with Bloch length r, the orientation-averaged
// n-copy state is a direct sum over irreps j of f_j^{(n)}(r) times the
// projector onto all spin-j copies. Everything downstream (ratios R, gaps G,
// sector weights) is built from f.

#include <string>
#include <variant>

#include "qlearn/angular.hpp"

namespace qlearn {

struct FixedPurities {
  double r1 = 1.0;
  double r2 = 1.0;
};
struct HardSphere {};
struct FixedOverlap {
  double theta = 0.0;
};
struct FixedOverlapDim {
  double theta = 0.0;
  int d = 2;
};

using PriorScenario = std::variant<FixedPurities, HardSphere, FixedOverlap, FixedOverlapDim>;

/// Throws std::invalid_argument when parameters are out of range.
void validate(const PriorScenario& scenario);

std::string describe(const PriorScenario& scenario);

/// Prior over one template's Bloch length: a fixed r, or the uniform
/// ball measure 3 r^2 dr.
struct FixedPurity {
  double r = 1.0;
};
using PurityPrior = std::variant<FixedPurity, HardSphere>;

/// Template priors for scenarios that factorize over the two templates.
/// Throws std::invalid_argument for the overlap scenarios.
PurityPrior first_template(const PriorScenario& scenario);
PurityPrior second_template(const PriorScenario& scenario);

/// sign * exp(log_magnitude); sign == 0 iff the value is exactly zero.
struct LogWeight {
  double log_magnitude = 0.0;
  int sign = 0;

  static LogWeight zero() { return LogWeight{}; }
  static LogWeight from_log(double log_magnitude) { return LogWeight{log_magnitude, 1}; }
  static LogWeight from_value(double value);

  bool is_zero() const { return sign == 0; }
  double value() const;

  friend LogWeight operator*(LogWeight a, LogWeight b);
  friend LogWeight operator/(LogWeight a, LogWeight b);
};

/// f_j^{(n)}(r). The r -> 0 and r = 1 limits are taken analytically.
/// Returns zero weight when j is not an irrep label of n qubits.
LogWeight log_f_fixed(SpinLabel j, int n, double r);
double f_fixed(SpinLabel j, int n, double r);

/// f_j^{(n)} averaged over 3 r^2 dr: 6 (n/2-j)! (1+n/2+j)! / (n+3)!.
LogWeight log_f_hard_sphere(SpinLabel j, int n);
double f_hard_sphere(SpinLabel j, int n);

LogWeight log_f(SpinLabel j, int n, const PurityPrior& prior);
double f(SpinLabel j, int n, const PurityPrior& prior);

/// R^{(n)}_{j,sign} = f^{(n+1)}_{j+sign/2} / f^{(n)}_j; 0 when j+sign/2 is
/// not a valid label.
double ratio_R(SpinLabel j, int n, Sign sign, const PurityPrior& prior);

/// G_j = f^{(n+1)}_{j+1/2} - f^{(n+1)}_{j-1/2}.
double gap_G(SpinLabel j, int n, const PurityPrior& prior);

/// f_s(r1) f_t(r2) #(s,n) #(t,n): the q-independent part of the weight of
/// every (s, t, q) sector. Only for factorizing scenarios.
LogWeight sector_log_weight(SpinLabel s, SpinLabel t, int n, const PriorScenario& scenario);

}  // namespace qlearn
