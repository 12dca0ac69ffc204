#include "qlearn/numeric.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace qlearn {

namespace {

constexpr int kLogFactorialTableSize = 8192;

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactorialTableSize);
    for (int k = 0; k < kLogFactorialTableSize; ++k) {
      t[k] = std::lgamma(static_cast<double>(k) + 1.0);
    }
    return t;
  }();
  return table;
}

}  // namespace

std::string to_string(BigCount value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

double log_factorial(int k) {
  if (k < 0) throw std::domain_error("log_factorial: negative argument");
  if (k < kLogFactorialTableSize) return log_factorial_table()[k];
  return std::lgamma(static_cast<double>(k) + 1.0);
}

long double log_factorial_ld(long double k) {
  if (k < 0) throw std::domain_error("log_factorial_ld: negative argument");
  return std::lgamma(k + 1.0L);
}

std::uint64_t factorial_exact(int k) {
  if (k < 0 || k > 20) throw std::domain_error("factorial_exact: argument outside [0, 20]");
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

BigCount binomial_exact(int n, int k) {
  if (n < 0 || n > 127) throw std::domain_error("binomial_exact: n outside [0, 127]");
  if (k < 0 || k > n) return 0;
  // Pascal rows: additions only, so nothing overflows below n = 128.
  std::vector<BigCount> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) row[j] += row[j - 1];
  }
  return row[k];
}

double stable_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(), [](double a, double b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return a > b;
  });
  CompensatedSum acc;
  for (double t : terms) acc.add(t);
  return acc.value();
}

}  // namespace qlearn
