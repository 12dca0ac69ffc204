#include "qlearn/priors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qlearn {

namespace {

constexpr double kLog2 = 0.69314718055994530942;
constexpr double kPi = 3.14159265358979323846;

bool is_label_of(SpinLabel j, int n) {
  return n >= 0 && j.twice() <= n && (n - j.twice()) % 2 == 0;
}

void check_purity(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("Bloch length must lie in [0, 1]");
  }
}

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= kPi + 1e-12)) {
    throw std::invalid_argument("theta must lie in [0, pi]");
  }
}

}  // namespace

void validate(const PriorScenario& scenario) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FixedPurities>) {
          check_purity(s.r1);
          check_purity(s.r2);
        } else if constexpr (std::is_same_v<T, FixedOverlap>) {
          check_theta(s.theta);
        } else if constexpr (std::is_same_v<T, FixedOverlapDim>) {
          check_theta(s.theta);
          if (s.d < 2) throw std::invalid_argument("dimension d must be at least 2");
        }
      },
      scenario);
}

std::string describe(const PriorScenario& scenario) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FixedPurities>) {
          os << "fixed-purity(r1=" << s.r1 << ", r2=" << s.r2 << ")";
        } else if constexpr (std::is_same_v<T, HardSphere>) {
          os << "hard-sphere";
        } else if constexpr (std::is_same_v<T, FixedOverlap>) {
          os << "fixed-overlap(theta=" << s.theta << ")";
        } else {
          os << "fixed-overlap-dim(theta=" << s.theta << ", d=" << s.d << ")";
        }
      },
      scenario);
  return os.str();
}

PurityPrior first_template(const PriorScenario& scenario) {
  if (const auto* fp = std::get_if<FixedPurities>(&scenario)) return FixedPurity{fp->r1};
  if (std::holds_alternative<HardSphere>(scenario)) return HardSphere{};
  throw std::invalid_argument("scenario does not factorize over templates");
}

PurityPrior second_template(const PriorScenario& scenario) {
  if (const auto* fp = std::get_if<FixedPurities>(&scenario)) return FixedPurity{fp->r2};
  if (std::holds_alternative<HardSphere>(scenario)) return HardSphere{};
  throw std::invalid_argument("scenario does not factorize over templates");
}

LogWeight LogWeight::from_value(double value) {
  if (value == 0.0) return zero();
  return LogWeight{std::log(std::abs(value)), value > 0 ? 1 : -1};
}

double LogWeight::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_magnitude);
}

LogWeight operator*(LogWeight a, LogWeight b) {
  if (a.sign == 0 || b.sign == 0) return LogWeight::zero();
  return LogWeight{a.log_magnitude + b.log_magnitude, a.sign * b.sign};
}

LogWeight operator/(LogWeight a, LogWeight b) {
  if (b.sign == 0) throw std::domain_error("LogWeight: division by zero");
  if (a.sign == 0) return LogWeight::zero();
  return LogWeight{a.log_magnitude - b.log_magnitude, a.sign * b.sign};
}

LogWeight log_f_fixed(SpinLabel j, int n, double r) {
  check_purity(r);
  if (!is_label_of(j, n)) return LogWeight::zero();
  const int k = j.dimension();            // 2j + 1
  const int e = (n - j.twice()) / 2;      // n/2 - j
  if (r == 0.0) return LogWeight::from_log(-n * kLog2);
  if (r == 1.0) {
    if (e > 0) return LogWeight::zero();
    return LogWeight::from_log(-std::log(static_cast<double>(n + 1)));
  }
  // [((1+r)/2)^k - ((1-r)/2)^k] / r = ((1+r)/2)^k (1 - x^k) / r, x = (1-r)/(1+r)
  const double log_one_minus_xk = std::log(-std::expm1(k * std::log1p(-2.0 * r / (1.0 + r))));
  const double log_mixed = std::log1p(-r) + std::log1p(r) - 2.0 * kLog2;
  const double l = -std::log(static_cast<double>(k)) + e * log_mixed +
                   k * (std::log1p(r) - kLog2) + log_one_minus_xk - std::log(r);
  return LogWeight::from_log(l);
}

double f_fixed(SpinLabel j, int n, double r) { return log_f_fixed(j, n, r).value(); }

LogWeight log_f_hard_sphere(SpinLabel j, int n) {
  if (!is_label_of(j, n)) return LogWeight::zero();
  const int e = (n - j.twice()) / 2;
  const int top = (n + j.twice()) / 2 + 1;
  return LogWeight::from_log(std::log(6.0) + log_factorial(e) + log_factorial(top) -
                             log_factorial(n + 3));
}

double f_hard_sphere(SpinLabel j, int n) { return log_f_hard_sphere(j, n).value(); }

LogWeight log_f(SpinLabel j, int n, const PurityPrior& prior) {
  if (const auto* fp = std::get_if<FixedPurity>(&prior)) return log_f_fixed(j, n, fp->r);
  return log_f_hard_sphere(j, n);
}

double f(SpinLabel j, int n, const PurityPrior& prior) { return log_f(j, n, prior).value(); }

double ratio_R(SpinLabel j, int n, Sign sign, const PurityPrior& prior) {
  const int shifted = j.twice() + to_int(sign);
  if (shifted < 0) return 0.0;
  const LogWeight num = log_f(spin(shifted), n + 1, prior);
  if (num.is_zero()) return 0.0;
  const LogWeight den = log_f(j, n, prior);
  if (den.is_zero()) {
    throw std::domain_error("ratio_R: f_j^(n) vanishes for j = " + j.str());
  }
  return (num / den).value();
}

double gap_G(SpinLabel j, int n, const PurityPrior& prior) {
  const double up = f(j.plus_half(), n + 1, prior);
  const double down = j.twice() >= 1 ? f(j.minus_half(), n + 1, prior) : 0.0;
  return up - down;
}

LogWeight sector_log_weight(SpinLabel s, SpinLabel t, int n, const PriorScenario& scenario) {
  const LogWeight fs = log_f(s, n, first_template(scenario));
  const LogWeight ft = log_f(t, n, second_template(scenario));
  const double log_mult = log_multiplicity_irrep(s, n) + log_multiplicity_irrep(t, n);
  if (!std::isfinite(log_mult)) return LogWeight::zero();
  return fs * ft * LogWeight::from_log(log_mult);
}

}  // namespace qlearn
