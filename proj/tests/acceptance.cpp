// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <boost/math/quadrature/gauss.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qlearn/angular.hpp"
#include "qlearn/asymptotics.hpp"
#include "qlearn/oracle.hpp"
#include "qlearn/povm.hpp"
#include "qlearn/spectrum.hpp"

using namespace qlearn;
using boost::math::quadrature::gauss;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

EngineOptions engine_options() {
  EngineOptions o;
  o.threads = default_thread_count();
  return o;
}

Outcome residual_order(const PriorScenario& sc, int power) {
  Outcome o;
  double scaled[2];
  const int ns[2] = {100, 200};
  for (int k = 0; k < 2; ++k) {
    const double exact = p_err_exact(ns[k], sc, engine_options());
    scaled[k] = std::pow(ns[k], power) * (exact - p_asym(ns[k], sc)->value());
  }
  o.detail = "n^" + std::to_string(power) + " R = " + fmt(scaled[0]) + ", " + fmt(scaled[1]);
  const double ratio = std::abs(scaled[0] / scaled[1]);
  o.require(std::abs(scaled[0]) < 10 && std::abs(scaled[1]) < 10, "residual not bounded");
  o.require(ratio >= 0.5 && ratio <= 2.0, "ratio " + fmt(ratio) + " outside [1/2, 2]");
  return o;
}

Outcome criterion1() {
  Outcome o;
  double worst = 0.0;
  for (int k = 1; k <= 50; ++k) {
    const double theta = kPi * k / 50.0;
    worst = std::max(worst, std::abs(p_err_exact(1, FixedOverlap{theta}) - p_err_n1_closed_form(theta)));
  }
  o.detail = "max deviation " + fmt(worst);
  o.require(worst <= 1e-12, "deviation above 1e-12");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const std::vector<PriorScenario> scenarios = {FixedPurities{0.75, 0.5}, FixedPurities{0.9, 0.9},
                                                FixedPurities{1.0, 1.0},  HardSphere{},
                                                FixedOverlap{kPi / 6},    FixedOverlap{kPi / 3},
                                                FixedOverlap{kPi / 2}};
  double worst = 0.0;
  for (const auto& sc : scenarios) {
    for (int n : {1, 2}) {
      worst = std::max(worst, std::abs(p_err_min(n, sc).p_exact - p_err_oracle(n, sc)));
    }
  }
  o.detail = "max |engine - oracle| " + fmt(worst);
  o.require(worst <= 1e-8, "disagreement above 1e-8");
  return o;
}

Outcome criterion6() {
  Outcome o;
  o.require(helstrom_hard_sphere_rational() == Rational{17, 70}, "hard-sphere baseline is not 17/70");
  const double a = 0.75, b = 0.5;
  const double distance = 0.5 * gauss<double, 64>::integrate(
                                    [&](double v) { return 2 * v * std::sqrt((a - b) * (a - b) + 2 * a * b * v * v); },
                                    0.0, std::sqrt(2.0));
  const double quad = 0.5 - 0.25 * distance;
  const double fp = helstrom_avg(FixedPurities{a, b});
  o.require(std::abs(fp - quad) <= 1e-10, "fixed-purity baseline off quadrature");
  int violations = 0;
  for (const auto& sc : {PriorScenario{FixedPurities{0.75, 0.5}}, PriorScenario{FixedPurities{0.9, 0.9}},
                         PriorScenario{FixedPurities{1.0, 1.0}}, PriorScenario{HardSphere{}},
                         PriorScenario{FixedOverlap{kPi / 6}}, PriorScenario{FixedOverlap{kPi / 3}},
                         PriorScenario{FixedOverlap{kPi / 2}}}) {
    double previous = 0.5;
    for (int n = 1; n <= 40; ++n) {
      const ErrorReport r = p_err_min(n, sc);
      if (r.p_exact > previous + 1e-12 || r.p_exact < r.helstrom - 1e-10) ++violations;
      previous = r.p_exact;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " monotonicity or baseline violations");
  o.detail = "17/70 exact, (3/4,1/2) baseline " + fmt(fp) + " vs quadrature " + fmt(quad) + o.detail;
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (int d : {2, 3, 5}) {
    for (int n : {1, 6, 25}) {
      for (double theta : {0.3, kPi / 3, 2.5}) {
        o.require(p_err_exact(n, FixedOverlapDim{theta, d}) == p_err_exact(n, FixedOverlap{theta}),
                  "d = " + std::to_string(d) + " differs from the qubit value");
      }
    }
    const double quad = gauss<double, 64>::integrate(
        [&](double u) { return 0.5 * (1 - u) * (d - 1) * std::pow(u * u, d - 2) * 2 * u; }, 0.0, 1.0);
    const double leading = p_asym_dimension_avg(100, d).leading;
    o.require(std::abs(leading - quad) <= 1e-10, "d = " + std::to_string(d) + " leading term off quadrature");
  }
  if (o.pass) o.detail = "identical values for d in {2,3,5}; leading terms match quadrature";
  return o;
}

double six_j_by_contraction(int a, int b, int c, int d, int e, int f) {
  const SpinLabel j1 = spin(a), j2 = spin(b), j12 = spin(c), j3 = spin(d), J = spin(e), j23 = spin(f);
  if (!triangle(j1, j2, j12) || !triangle(j12, j3, J) || !triangle(j2, j3, j23) || !triangle(j1, j23, J)) {
    return 0.0;
  }
  double overlap = 0.0;
  for (int m1 = -a; m1 <= a; m1 += 2) {
    for (int m2 = -b; m2 <= b; m2 += 2) {
      const int m3 = e - m1 - m2;
      if (std::abs(m3) > d || (d - m3) % 2 != 0) continue;
      if (std::abs(m1 + m2) > c || std::abs(m2 + m3) > f) continue;
      overlap += clebsch_gordan(j1, {m1}, j2, {m2}, j12, {m1 + m2}) * clebsch_gordan(j12, {m1 + m2}, j3, {m3}, J, {e}) *
                 clebsch_gordan(j2, {m2}, j3, {m3}, j23, {m2 + m3}) * clebsch_gordan(j1, {m1}, j23, {m2 + m3}, J, {e});
    }
  }
  const double sign = ((a + b + d + e) / 2) % 2 == 0 ? 1.0 : -1.0;
  return sign * overlap / std::sqrt(static_cast<double>((c + 1) * (f + 1)));
}

Outcome criterion8() {
  Outcome o;
  double worst_trace = 0.0, worst_orth = 0.0, worst_6j = 0.0, worst_swap = 0.0;
  for (const auto& sc : {PriorScenario{FixedPurities{0.75, 0.5}}, PriorScenario{HardSphere{}},
                         PriorScenario{FixedPurities{1.0, 0.3}}}) {
    for (int n = 1; n <= 14; ++n) {
      std::vector<double> weighted;
      BigCount total = 0;
      for (const auto& e : spectrum_report(n, sc)) {
        weighted.push_back(e.weighted());
        total += e.multiplicity;
      }
      worst_trace = std::max(worst_trace, std::abs(stable_sum(weighted)));
      o.require(total == (static_cast<BigCount>(1) << (2 * n + 1)), "multiplicity mismatch at n = " + std::to_string(n));
    }
  }
  for (int n = 1; n <= 30; ++n) {
    for (const SectorKey& k : enumerate_sectors(n)) {
      if (k.case_tag != CaseTag::D) continue;
      const RecouplingRow c = recoupling_row(k.s, k.t, k.q);
      worst_orth = std::max({worst_orth, std::abs(c.c_pp * c.c_pp + c.c_pm * c.c_pm - 1),
                             std::abs(c.c_mp * c.c_mp + c.c_mm * c.c_mm - 1),
                             std::abs(c.c_pp * c.c_mp + c.c_pm * c.c_mm)});
    }
  }
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int c = 0; c <= 8; ++c)
        for (int d = 0; d <= 4; ++d)
          for (int e = 0; e <= 8; ++e)
            for (int f = 0; f <= 8; ++f) {
              if ((a + b + c) % 2 || (c + d + e) % 2 || (b + d + f) % 2 || (a + e + f) % 2) continue;
              const double racah = wigner6j(spin(a), spin(b), spin(c), spin(d), spin(e), spin(f));
              worst_6j = std::max(worst_6j, std::abs(racah - six_j_by_contraction(a, b, c, d, e, f)));
            }
  for (const auto& sc : {PriorScenario{HardSphere{}}, PriorScenario{FixedPurities{0.6, 0.6}},
                         PriorScenario{FixedOverlap{kPi / 3}}}) {
    for (int n : {1, 2}) worst_swap = std::max(worst_swap, swap_antisymmetry_residual(n, sc));
  }
  o.require(worst_trace <= 1e-12, "trace not null");
  o.require(worst_orth <= 1e-12, "recoupling rows not orthonormal");
  o.require(worst_6j <= 1e-12, "6j disagrees with CG contraction");
  o.require(worst_swap <= 1e-12, "swap residual above 1e-12");
  o.detail = "trace " + fmt(worst_trace) + ", orthogonality " + fmt(worst_orth) + ", 6j " + fmt(worst_6j) +
             ", swap " + fmt(worst_swap) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

CentralMoments numeric_moments(const std::vector<std::pair<long double, long double>>& pmf) {
  long double mean = 0;
  for (const auto& [x, p] : pmf) mean += p * x;
  long double c[3] = {0, 0, 0};
  for (const auto& [x, p] : pmf) {
    const long double d = x - mean;
    c[0] += p * d * d;
    c[1] += p * d * d * d;
    c[2] += p * d * d * d * d;
  }
  return {static_cast<double>(mean), static_cast<double>(c[0]), static_cast<double>(c[1]), static_cast<double>(c[2])};
}

Outcome criterion9() {
  Outcome o;
  const int n = 50;
  double worst12 = 0.0, worst34 = 0.0;
  for (double r : {0.2, 0.6, 0.9}) {
    std::vector<std::pair<long double, long double>> pmf;
    const long double p = (1 + r) / 2.0L;
    for (int k = 0; k <= n; ++k) {
      const long double lc = std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L);
      pmf.emplace_back((2.0L * k - n) / n, std::exp(lc + k * std::log(p) + (n - k) * std::log1p(-p)));
    }
    const CentralMoments ex = numeric_moments(pmf);
    const CentralMoments cf = moments_closed_form(MomentDistribution::SDist, n, r);
    worst12 = std::max({worst12, std::abs(ex.mu1 - cf.mu1), std::abs(ex.mu2 - cf.mu2)});
    worst34 = std::max({worst34, std::abs(ex.mu3 - cf.mu3), std::abs(ex.mu4 - cf.mu4)});
  }
  for (int twice_h = -n; twice_h <= n; twice_h += 10) {
    std::vector<std::pair<long double, long double>> pmf;
    for (int tq = std::abs(n + 1 + twice_h); tq <= 2 * n + 1; tq += 2) {
      const long double cg = clebsch_gordan(spin(n + 1), {n + 1}, spin(n), {twice_h}, spin(tq), {n + 1 + twice_h});
      pmf.emplace_back(tq / 2.0L, cg * cg);
    }
    const CentralMoments ex = numeric_moments(pmf);
    const CentralMoments cf = moments_closed_form(MomentDistribution::QDist, n, twice_h / 2.0);
    worst12 = std::max({worst12, std::abs(ex.mu1 - cf.mu1), std::abs(ex.mu2 - cf.mu2)});
    // The Gamma-function forms of mu3 and mu4 cancel terms of size (n+1)^3 and (n+1)^4.
    worst34 = std::max({worst34, std::abs(ex.mu3 - cf.mu3) / std::pow(n + 1.0, 3),
                        std::abs(ex.mu4 - cf.mu4) / std::pow(n + 1.0, 4)});
  }
  o.require(worst12 <= 1e-10, "mu1/mu2 off by " + fmt(worst12));
  o.require(worst34 <= 1e-15, "mu3/mu4 off by " + fmt(worst34));
  o.detail = "mu1,mu2 max deviation " + fmt(worst12) + ", mu3,mu4 max deviation relative to the cancelled terms " + fmt(worst34) +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const std::int64_t shots = 100000;
  const int threads = default_thread_count();
  std::ostringstream detail;
  for (double theta : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4}) {
    const SimulationResult r = simulate_misclassification(theta, shots, NoiseModel{}, 7, threads);
    const double expected = p_err_n1_closed_form(theta);
    const double se = std::sqrt(expected * (1 - expected) / shots);
    const double z = (r.frequency - expected) / se;
    detail << "z=" << fmt(z) << " ";
    o.require(std::abs(z) <= 3.0, "noiseless deviation above 3 SE at theta " + fmt(theta));
  }
  const double theta = kPi / 2;
  NoiseModel dep;
  dep.kind = NoiseKind::Depolarizing;
  double previous = simulate_misclassification(theta, shots, NoiseModel{}, 8, threads).frequency;
  for (double p : {0.002, 0.01, 0.03, 0.5}) {
    dep.p_depol = p;
    const double f = simulate_misclassification(theta, shots, dep, 8, threads).frequency;
    o.require(f > previous || p == 0.5, "depolarizing not monotone at p " + fmt(p));
    previous = f;
  }
  o.require(std::abs(previous - 0.5) <= 3 * std::sqrt(0.25 / shots), "depolarizing does not saturate at 1/2");
  NoiseModel th;
  th.kind = NoiseKind::Thermal;
  previous = simulate_misclassification(theta, shots, NoiseModel{}, 9, threads).frequency;
  for (double t : {2e5, 4e4, 1e4, 100.0}) {
    th.t1 = th.t2 = t;
    const double f = simulate_misclassification(theta, shots, th, 9, threads).frequency;
    o.require(f > previous || t == 100.0, "thermal not monotone at T " + fmt(t));
    previous = f;
  }
  o.require(std::abs(previous - 0.5) <= 3 * std::sqrt(0.25 / shots), "thermal does not saturate at 1/2");
  o.detail = detail.str() + "noisy runs monotone and saturating" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "n = 1 fixed-overlap closed form", 1.0, criterion1},
      {2, "oracle equivalence", 60.0, criterion2},
      {3, "hard-sphere asymptotics", 300.0, [] { return residual_order(HardSphere{}, 2); }},
      {4, "fixed-purity asymptotics", 300.0, [] { return residual_order(FixedPurities{0.75, 0.5}, 2); }},
      {5, "fixed-overlap asymptotics", 300.0, [] { return residual_order(FixedOverlap{kPi / 3}, 3); }},
      {6, "Helstrom baselines", 60.0, criterion6},
      {7, "d-dimensional consistency", 60.0, criterion7},
      {8, "structural invariants", 120.0, criterion8},
      {9, "central moments", 60.0, criterion9},
      {10, "shot simulation", 300.0, criterion10},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.limit_seconds) o.require(false, "runtime above " + fmt(c.limit_seconds) + " s");
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
