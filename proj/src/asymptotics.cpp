#include "qlearn/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qlearn {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

Rational operator+(Rational a, Rational b) {
  return make_rational(a.num * b.den + b.num * a.den, a.den * b.den);
}
Rational operator-(Rational a, Rational b) { return a + Rational{-b.num, b.den}; }
Rational operator*(Rational a, Rational b) {
  return make_rational(a.num * b.num, a.den * b.den);
}

// Integral of a^i b^j over the triangle 0 < b < a < 1.
Rational triangle_monomial(int i, int j) { return make_rational(1, (j + 1) * (i + j + 2)); }

void require_n(int n) {
  if (n < 1) throw std::invalid_argument("expansion needs n >= 1");
}

long double lgam(long double x) { return std::lgamma(x); }

// Gamma(3/2+h+n/2) Gamma(2+n) / (Gamma(1+h+n/2) Gamma(3/2+n))
long double qdist_G(int n, long double h) {
  const long double hn = h + n / 2.0L;
  return std::exp(lgam(1.5L + hn) + lgam(2.0L + n) - lgam(1.0L + hn) - lgam(1.5L + n));
}

CentralMoments sdist_closed(int n, double r) {
  const double v = 1.0 - r * r;
  return CentralMoments{r, v / n, -2.0 * r * v / (static_cast<double>(n) * n),
                        v * (4.0 + 3.0 * (n - 2) * v) / std::pow(static_cast<double>(n), 3)};
}

CentralMoments qdist_closed(int n, long double h, bool printed) {
  const long double nn = n;
  const long double hn = h + nn / 2.0L;
  const long double G = qdist_G(n, h);
  CentralMoments m;
  if (printed) {
    const long double g =
        std::exp(lgam(0.5L + hn) + lgam(2.0L + nn) - lgam(1.0L + hn) - lgam(1.5L + nn));
    m.mu1 = static_cast<double>(g - 0.5L);
  } else {
    m.mu1 = static_cast<double>(G - 0.5L);
  }
  m.mu2 = static_cast<double>(0.5L * (1 + nn) * (2 + 2 * h + nn) - G * G);
  const long double poly3 = 8 + 2 * h * (5 + 4 * nn) + nn * (11 + 4 * nn);
  m.mu3 = printed ? static_cast<double>(-poly3 * G + 2 * G * G * G)
                  : static_cast<double>(-poly3 * G / 4 + 2 * G * G * G);
  const long double lead4 =
      (1 + nn) * (4 + 10 * nn + 4 * h * h * nn + 6 * nn * nn + nn * nn * nn +
                  4 * h * (1 + 3 * nn + nn * nn)) / 4;
  const long double log_tail = 2 * lgam(2 + 2 * h + nn) + 2 * lgam(3 + 2 * nn) -
                               (3 + 2 * h + 3 * nn) * std::log(4.0L) -
                               4 * lgam(1 + hn) - 4 * lgam(1.5L + nn);
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double tail = (2 + 2 * nn + nn * nn + 2 * h * (2 + nn)) * pi * pi * std::exp(log_tail);
  m.mu4 = static_cast<double>(lead4 - 3 * G * G * G * G + tail);
  return m;
}

void check_qdist_h(int n, double h) {
  const double twice = 2.0 * h;
  if (std::abs(twice - std::round(twice)) > 1e-9 || std::abs(h) > n / 2.0 + 1e-9 ||
      static_cast<long long>(std::llround(twice + n)) % 2 != 0) {
    throw std::invalid_argument("h must satisfy |h| <= n/2 with n/2 + h integral");
  }
}

}  // namespace

double helstrom_pure(double theta) { return 0.5 * (1.0 - std::abs(std::cos(theta / 2.0))); }

Rational helstrom_hard_sphere_rational() {
  // With a = max(r1, r2), b = min(r1, r2), the orientation average of
  // ||rho1 - rho2||_1 / 4 is (3a^2 + b^2) / (12 a). Weight 9 a^2 b^2 on each
  // of the two orderings.
  const Rational inner = Rational{3, 1} * triangle_monomial(3, 2) + triangle_monomial(1, 4);
  const Rational trace_term = Rational{2, 1} * Rational{9, 12} * inner;
  return Rational{1, 2} - trace_term;
}

double helstrom_avg(const PriorScenario& scenario) {
  validate(scenario);
  if (const auto* fp = std::get_if<FixedPurities>(&scenario)) {
    const double a = std::max(fp->r1, fp->r2);
    const double b = std::min(fp->r1, fp->r2);
    if (a == 0.0) return 0.5;
    // Equal to 1/2 - [(r1+r2)^3 - |r1-r2|^3] / (24 r1 r2), without the 0/0.
    return 0.5 - (3.0 * a * a + b * b) / (12.0 * a);
  }
  if (std::holds_alternative<HardSphere>(scenario)) {
    const Rational p = helstrom_hard_sphere_rational();
    return static_cast<double>(p.num) / static_cast<double>(p.den);
  }
  if (const auto* fo = std::get_if<FixedOverlap>(&scenario)) return helstrom_pure(fo->theta);
  const auto& fd = std::get<FixedOverlapDim>(scenario);
  return 0.5 - static_cast<double>(fd.d - 1) / (2.0 * fd.d - 1.0);
}

AsymptoticEstimate p_asym_fixed_purity(int n, double r1, double r2) {
  require_n(n);
  if (!(r1 > 0.0 && r1 <= 1.0 && r2 > 0.0 && r2 <= 1.0)) {
    throw std::invalid_argument("fixed-purity expansion needs r1, r2 in (0, 1]");
  }
  const double sum = r1 + r2;
  const double gap = std::abs(r1 - r2);
  const double p = r1 * r2;
  AsymptoticEstimate est;
  est.n = n;
  est.leading = 0.5 - (std::pow(sum, 3) - std::pow(gap, 3)) / (24.0 * p);
  est.order_1_over_n = 5.0 / (24.0 * n) * (std::pow(sum, 3) + std::pow(gap, 3)) / (p * p) -
                       1.0 / (24.0 * n) * (std::pow(sum, 5) - std::pow(gap, 5)) / (p * p * p);
  est.valid_region_note = "large n; singular as r1 or r2 -> 0";
  return est;
}

AsymptoticEstimate p_asym_hard_sphere(int n) {
  require_n(n);
  AsymptoticEstimate est;
  est.n = n;
  est.leading = 17.0 / 70.0;
  est.order_1_over_n = 18.0 / (35.0 * n);
  est.valid_region_note = "large n";
  return est;
}

AsymptoticEstimate p_asym_overlap(int n, double theta) {
  require_n(n);
  if (!(theta >= 0.0 && theta < kPi)) {
    throw std::invalid_argument("overlap expansion needs theta in [0, pi)");
  }
  const double c = std::cos(theta);
  AsymptoticEstimate est;
  est.n = n;
  est.leading = helstrom_pure(theta);
  est.order_1_over_n = (3.0 + c) / (8.0 * kSqrt2 * std::sqrt(1.0 + c)) / n;
  est.order_1_over_n2 = (1.0 - 60.0 * c - 5.0 * std::cos(2.0 * theta)) /
                        (128.0 * kSqrt2 * std::pow(1.0 + c, 1.5)) /
                        (static_cast<double>(n) * n);
  est.valid_region_note = "requires n (pi - theta) >> 1";
  if (n * (kPi - theta) < 10.0) {
    est.valid_region_note += "; WARNING: n (pi - theta) < 10, expansion unreliable near coincident templates";
  }
  return est;
}

AsymptoticEstimate p_asym_overlap_small_angle(int n, double theta) {
  require_n(n);
  AsymptoticEstimate est;
  est.n = n;
  est.leading = theta * theta / 16.0;
  est.order_1_over_n = 1.0 / (4.0 * n);
  est.order_1_over_n2 = -(1.0 - theta * theta / 4.0) / (8.0 * static_cast<double>(n) * n);
  est.valid_region_note = "near-orthogonal templates, theta << 1";
  return est;
}

AsymptoticEstimate p_asym_dimension_avg(int n, int d) {
  require_n(n);
  if (d < 2) throw std::invalid_argument("dimension d must be at least 2");
  const double dd = d;
  AsymptoticEstimate est;
  est.n = n;
  est.leading = 0.5 - (dd - 1.0) / (2.0 * dd - 1.0);
  est.order_1_over_n = (dd - 1.0) * (dd - 1.0) / (3.0 + 4.0 * dd * (dd - 2.0)) / n;
  est.valid_region_note = "large n, overlap averaged over Haar-random pure states";
  return est;
}

std::optional<AsymptoticEstimate> p_asym(int n, const PriorScenario& scenario) {
  if (const auto* fp = std::get_if<FixedPurities>(&scenario)) {
    if (fp->r1 <= 0.0 || fp->r2 <= 0.0) return std::nullopt;
    return p_asym_fixed_purity(n, fp->r1, fp->r2);
  }
  if (std::holds_alternative<HardSphere>(scenario)) return p_asym_hard_sphere(n);
  const double theta = std::holds_alternative<FixedOverlap>(scenario)
                           ? std::get<FixedOverlap>(scenario).theta
                           : std::get<FixedOverlapDim>(scenario).theta;
  if (theta >= kPi) return std::nullopt;
  return p_asym_overlap(n, theta);
}

CentralMoments moments_closed_form(MomentDistribution which, int n, double parameter) {
  require_n(n);
  if (which == MomentDistribution::SDist) {
    if (!(parameter >= -1.0 && parameter <= 1.0)) {
      throw std::invalid_argument("s-distribution parameter r must lie in [-1, 1]");
    }
    return sdist_closed(n, parameter);
  }
  check_qdist_h(n, parameter);
  return qdist_closed(n, parameter, false);
}

CentralMoments moments_as_printed(MomentDistribution which, int n, double parameter) {
  require_n(n);
  if (which == MomentDistribution::SDist) {
    const double v = 1.0 - parameter * parameter;
    CentralMoments m = sdist_closed(n, parameter);
    m.mu3 = 2.0 * parameter * v / n;
    m.mu4 = (-1.0 + parameter * parameter) *
            (2.0 - 6.0 * parameter * parameter + 3.0 * n * (-1.0 + parameter * parameter)) /
            std::pow(static_cast<double>(n), 3);
    return m;
  }
  check_qdist_h(n, parameter);
  return qdist_closed(n, parameter, true);
}

CentralMoments qdist_moments_expansion(int n, double s) {
  require_n(n);
  const double nn = n;
  const double sp = 1.0 + s;
  CentralMoments m;
  m.mu1 = nn * std::sqrt(sp) / kSqrt2 - 0.5 + (11.0 + 5.0 * s) / (8.0 * kSqrt2 * std::sqrt(sp)) +
          (9.0 + 14.0 * s - 23.0 * s * s) / (128.0 * kSqrt2 * nn * std::pow(sp, 1.5));
  m.mu2 = nn * (1.0 - s) / 8.0 + (-1.0 + 2.0 * s - s * s) / (64.0 * sp);
  m.mu3 = (s - 1.0) * (s - 1.0) * nn / (32.0 * kSqrt2 * std::sqrt(sp));
  m.mu4 = 3.0 / 64.0 * (1.0 - 2.0 * s + s * s) * nn * nn;
  return m;
}

}  // namespace qlearn
