#include "qlearn/angular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qlearn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Half-sum of doubled spins; callers guarantee the sum is even.
int half(int twice_sum) { return twice_sum / 2; }

// ln of the triangle coefficient (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!.
double log_delta(SpinLabel a, SpinLabel b, SpinLabel c) {
  const int ta = a.twice();
  const int tb = b.twice();
  const int tc = c.twice();
  return log_factorial(half(ta + tb - tc)) + log_factorial(half(ta - tb + tc)) +
         log_factorial(half(-ta + tb + tc)) - log_factorial(half(ta + tb + tc) + 1);
}

// Accumulates sign * exp(log_mag) terms relative to the largest magnitude.
class SignedLogSum {
public:
  void add(int sign, double log_mag) {
    signs_.push_back(sign);
    logs_.push_back(log_mag);
  }
  double value_times_exp(double log_prefactor) const {
    if (logs_.empty()) return 0.0;
    const double lmax = *std::max_element(logs_.begin(), logs_.end());
    CompensatedSum acc;
    for (std::size_t i = 0; i < logs_.size(); ++i) {
      acc.add(signs_[i] * std::exp(logs_[i] - lmax));
    }
    return acc.value() * std::exp(log_prefactor + lmax);
  }

private:
  std::vector<int> signs_;
  std::vector<double> logs_;
};

}  // namespace

SpinLabel SpinLabel::from_twice(int twice) {
  if (twice < 0) throw std::invalid_argument("SpinLabel: negative spin");
  return SpinLabel(twice);
}

std::string SpinLabel::str() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::A: return "A";
    case CaseTag::B: return "B";
    case CaseTag::C: return "C";
    case CaseTag::D: return "D";
  }
  return "?";
}

BigCount multiplicity_irrep(SpinLabel j, int n) {
  if (n < 0) throw std::invalid_argument("multiplicity_irrep: negative n");
  const int tj = j.twice();
  if (tj > n || (n - tj) % 2 != 0) return 0;
  const int k = (n - tj) / 2;
  // n!(2j+1)/(k!(n-k+1)!) = C(n, k) - C(n, k-1)
  return binomial_exact(n, k) - binomial_exact(n, k - 1);
}

double log_multiplicity_irrep(SpinLabel j, int n) {
  const int tj = j.twice();
  if (n < 0 || tj > n || (n - tj) % 2 != 0) return kNegInf;
  return log_factorial(n) + std::log(static_cast<double>(tj + 1)) -
         log_factorial((n - tj) / 2) - log_factorial((n + tj) / 2 + 1);
}

BigCount sector_multiplicity(const SectorKey& key, int n) {
  if (n > 62) throw std::domain_error("sector_multiplicity: exact count overflows beyond n = 62");
  return static_cast<BigCount>(key.q.dimension()) * multiplicity_irrep(key.s, n) *
         multiplicity_irrep(key.t, n);
}

bool triangle(SpinLabel a, SpinLabel b, SpinLabel c) {
  const int ta = a.twice();
  const int tb = b.twice();
  const int tc = c.twice();
  if ((ta + tb + tc) % 2 != 0) return false;
  return tc <= ta + tb && tc >= std::abs(ta - tb);
}

double clebsch_gordan(SpinLabel j1, Projection m1, SpinLabel j2, Projection m2, SpinLabel J,
                      Projection M) {
  const int tj1 = j1.twice();
  const int tj2 = j2.twice();
  const int tJ = J.twice();
  if (M.twice != m1.twice + m2.twice) return 0.0;
  if (std::abs(m1.twice) > tj1 || std::abs(m2.twice) > tj2 || std::abs(M.twice) > tJ) return 0.0;
  if ((tj1 - m1.twice) % 2 != 0 || (tj2 - m2.twice) % 2 != 0 || (tJ - M.twice) % 2 != 0) {
    return 0.0;
  }
  if (!triangle(j1, j2, J)) return 0.0;

  const double log_pref =
      0.5 * (std::log(static_cast<double>(tJ + 1)) + log_delta(j1, j2, J) +
             log_factorial(half(tj1 + m1.twice)) + log_factorial(half(tj1 - m1.twice)) +
             log_factorial(half(tj2 + m2.twice)) + log_factorial(half(tj2 - m2.twice)) +
             log_factorial(half(tJ + M.twice)) + log_factorial(half(tJ - M.twice)));

  const int a = half(tj1 + tj2 - tJ);
  const int b = half(tj1 - m1.twice);
  const int c = half(tj2 + m2.twice);
  const int d = half(tJ - tj2 + m1.twice);
  const int e = half(tJ - tj1 - m2.twice);
  const int kmin = std::max({0, -d, -e});
  const int kmax = std::min({a, b, c});

  SignedLogSum sum;
  for (int k = kmin; k <= kmax; ++k) {
    const double l = -(log_factorial(k) + log_factorial(a - k) + log_factorial(b - k) +
                       log_factorial(c - k) + log_factorial(d + k) + log_factorial(e + k));
    sum.add(k % 2 == 0 ? 1 : -1, l);
  }
  return sum.value_times_exp(log_pref);
}

double wigner6j(SpinLabel j1, SpinLabel j2, SpinLabel j3, SpinLabel j4, SpinLabel j5,
                SpinLabel j6) {
  if (!triangle(j1, j2, j3) || !triangle(j1, j5, j6) || !triangle(j4, j2, j6) ||
      !triangle(j4, j5, j3)) {
    return 0.0;
  }
  const double log_pref =
      0.5 * (log_delta(j1, j2, j3) + log_delta(j1, j5, j6) + log_delta(j4, j2, j6) +
             log_delta(j4, j5, j3));

  const int a1 = half(j1.twice() + j2.twice() + j3.twice());
  const int a2 = half(j1.twice() + j5.twice() + j6.twice());
  const int a3 = half(j4.twice() + j2.twice() + j6.twice());
  const int a4 = half(j4.twice() + j5.twice() + j3.twice());
  const int b1 = half(j1.twice() + j2.twice() + j4.twice() + j5.twice());
  const int b2 = half(j2.twice() + j3.twice() + j5.twice() + j6.twice());
  const int b3 = half(j3.twice() + j1.twice() + j6.twice() + j4.twice());
  const int kmin = std::max({a1, a2, a3, a4});
  const int kmax = std::min({b1, b2, b3});

  SignedLogSum sum;
  for (int k = kmin; k <= kmax; ++k) {
    const double l = log_factorial(k + 1) -
                     (log_factorial(k - a1) + log_factorial(k - a2) + log_factorial(k - a3) +
                      log_factorial(k - a4) + log_factorial(b1 - k) + log_factorial(b2 - k) +
                      log_factorial(b3 - k));
    sum.add(k % 2 == 0 ? 1 : -1, l);
  }
  return sum.value_times_exp(log_pref);
}

double recoupling_C(SpinLabel s, SpinLabel t, SpinLabel q, Sign a, Sign b) {
  const int ts = s.twice() + to_int(a);
  const int tt = t.twice() + to_int(b);
  if (ts < 0 || tt < 0) return 0.0;
  const SpinLabel s_prime = SpinLabel::from_twice(ts);
  const SpinLabel t_prime = SpinLabel::from_twice(tt);
  const double phase = (to_int(a) + to_int(b) == 0) ? 1.0 : -1.0;
  const double norm = std::sqrt(static_cast<double>(s_prime.dimension()) * t_prime.dimension());
  return phase * norm * wigner6j(t_prime, t, spin(1), s_prime, s, q);
}

RecouplingRow recoupling_row(SpinLabel s, SpinLabel t, SpinLabel q) {
  return RecouplingRow{
      recoupling_C(s, t, q, Sign::Plus, Sign::Plus),
      recoupling_C(s, t, q, Sign::Plus, Sign::Minus),
      recoupling_C(s, t, q, Sign::Minus, Sign::Plus),
      recoupling_C(s, t, q, Sign::Minus, Sign::Minus),
  };
}

bool sector_allowed(SpinLabel s, SpinLabel t, SpinLabel q) {
  const int ts = s.twice();
  const int tt = t.twice();
  const int tq = q.twice();
  if ((ts + tt + 1 + tq) % 2 != 0) return false;
  return tq <= ts + tt + 1 && tq >= std::abs(std::abs(tt - ts) - 1);
}

CaseTag classify_sector(SpinLabel s, SpinLabel t, SpinLabel q) {
  if (!sector_allowed(s, t, q)) {
    throw std::invalid_argument("classify_sector: q = " + q.str() + " not reachable from s = " +
                                s.str() + ", t = " + t.str());
  }
  const int ts = s.twice();
  const int tt = t.twice();
  const int tq = q.twice();
  if (tq == ts + tt + 1) return CaseTag::A;
  if (tt > ts && tq == tt - ts - 1) return CaseTag::B;
  if (ts > tt && tq == ts - tt - 1) return CaseTag::C;
  return CaseTag::D;
}

std::vector<SectorKey> enumerate_sectors(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_sectors: n must be positive");
  std::vector<SectorKey> sectors;
  for (int ts = n % 2; ts <= n; ts += 2) {
    for (int tt = n % 2; tt <= n; tt += 2) {
      for (int tq = std::abs(std::abs(tt - ts) - 1); tq <= ts + tt + 1; tq += 2) {
        const SpinLabel s = spin(ts);
        const SpinLabel t = spin(tt);
        const SpinLabel q = spin(tq);
        sectors.push_back(SectorKey{s, t, q, classify_sector(s, t, q)});
      }
    }
  }
  return sectors;
}

}  // namespace qlearn
