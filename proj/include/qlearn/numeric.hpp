#pragma once

// Small numerical helpers shared by the engine: log-factorials, exact
// wide-integer counts, compensated summation.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace qlearn {

/// Exact counts (irrep and sector multiplicities). 128 bits hold every
/// sector multiplicity up to n = 62.
using BigCount = unsigned __int128;

std::string to_string(BigCount value);

/// ln(k!) for k >= 0. Tabulated for small k, lgamma beyond.
double log_factorial(int k);

/// ln(k!) in extended precision, used where large terms cancel.
long double log_factorial_ld(long double k);

/// k! exactly for 0 <= k <= 20.
std::uint64_t factorial_exact(int k);

/// Binomial coefficient C(n, k) exactly; n <= 127.
BigCount binomial_exact(int n, int k);

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Sums terms in order of decreasing magnitude with compensation. The
/// order is fully determined by the values, so the result does not depend
/// on how the input was produced.
double stable_sum(std::vector<double> terms);

}  // namespace qlearn
