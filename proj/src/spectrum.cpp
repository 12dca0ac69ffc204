#include "qlearn/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace qlearn {

namespace {

struct OverlapAngle {
  double theta = 0.0;
};

std::optional<OverlapAngle> overlap_angle(const PriorScenario& scenario) {
  if (const auto* fo = std::get_if<FixedOverlap>(&scenario)) return OverlapAngle{fo->theta};
  if (const auto* fd = std::get_if<FixedOverlapDim>(&scenario)) return OverlapAngle{fd->theta};
  return std::nullopt;
}

// Everything about an (s, t) pair that does not depend on q.
struct PairContext {
  LogWeight scale;  // f_s f_t
  double rs_plus = 0.0;
  double rs_minus = 0.0;
  double rt_plus = 0.0;
  double rt_minus = 0.0;
};

PairContext make_pair_context(SpinLabel s, SpinLabel t, int n, const PurityPrior& p1,
                              const PurityPrior& p2) {
  PairContext ctx;
  ctx.scale = log_f(s, n, p1) * log_f(t, n, p2);
  if (ctx.scale.is_zero()) return ctx;
  ctx.rs_plus = ratio_R(s, n, Sign::Plus, p1);
  ctx.rs_minus = ratio_R(s, n, Sign::Minus, p1);
  ctx.rt_plus = ratio_R(t, n, Sign::Plus, p2);
  ctx.rt_minus = ratio_R(t, n, Sign::Minus, p2);
  return ctx;
}

void fill_case_d(ThetaBlock& block, const PairContext& ctx) {
  const SectorKey& k = block.sector;
  const RecouplingRow c = recoupling_row(k.s, k.t, k.q);
  block.lam_pp = ctx.rs_plus - ctx.rt_plus * c.c_pp * c.c_pp - ctx.rt_minus * c.c_pm * c.c_pm;
  block.lam_mm = ctx.rs_minus - ctx.rt_plus * c.c_mp * c.c_mp - ctx.rt_minus * c.c_mm * c.c_mm;
  block.lam_pm = -(ctx.rt_plus * c.c_pp * c.c_mp + ctx.rt_minus * c.c_pm * c.c_mm);
}

ThetaBlock assemble_block(const SectorKey& sector, const PairContext& ctx) {
  ThetaBlock block;
  block.sector = sector;
  block.scale = ctx.scale;
  block.is_2x2 = sector.case_tag == CaseTag::D;
  if (ctx.scale.is_zero()) return block;
  switch (sector.case_tag) {
    case CaseTag::A: block.lam_pp = ctx.rs_plus - ctx.rt_plus; break;
    case CaseTag::B: block.lam_pp = ctx.rs_plus - ctx.rt_minus; break;
    case CaseTag::C: block.lam_mm = ctx.rs_minus - ctx.rt_plus; break;
    case CaseTag::D: fill_case_d(block, ctx); break;
  }
  return block;
}

struct Lambdas {
  double plus = 0.0;
  double minus = 0.0;
  bool two = false;
};

Lambdas block_lambdas(const ThetaBlock& block) {
  if (!block.is_2x2) {
    const double v = block.sector.case_tag == CaseTag::C ? block.lam_mm : block.lam_pp;
    return Lambdas{v, v, false};
  }
  const double mean = 0.5 * (block.lam_pp + block.lam_mm);
  const double radius = std::hypot(0.5 * (block.lam_mm - block.lam_pp), block.lam_pm);
  return Lambdas{mean + radius, mean - radius, true};
}

void require_factorizing(const PriorScenario& scenario) {
  if (!std::holds_alternative<FixedPurities>(scenario) &&
      !std::holds_alternative<HardSphere>(scenario)) {
    throw std::invalid_argument("fixed-overlap scenarios have no per-template factorization");
  }
}

SectorKey top_sector(SpinLabel q, int n) {
  const SpinLabel s = spin(n);
  return SectorKey{s, s, q, classify_sector(s, s, q)};
}

// Positive and negative weighted eigenvalues of the fixed-overlap spectrum.
std::vector<double> overlap_weighted_terms(int n, double theta) {
  std::vector<double> terms;
  for (int tq = 1; tq <= 2 * n - 1; tq += 2) {
    const SpinLabel q = spin(tq);
    const double c_pm =
        std::abs(recoupling_C(spin(n), spin(n), q, Sign::Plus, Sign::Minus));
    const double w = q.dimension() * phi_overlap(q, n, theta) * c_pm;
    terms.push_back(w);
    terms.push_back(-w);
  }
  return terms;
}

// Weighted eigenvalues for factorizing scenarios, computed in log space.
std::vector<double> factorized_weighted_terms(int n, const PriorScenario& scenario,
                                              const EngineOptions& options) {
  const PurityPrior p1 = first_template(scenario);
  const PurityPrior p2 = second_template(scenario);
  const int count = n / 2 + 1;  // number of s (or t) values
  const int base = n % 2;

  // ln(f_s #s) and ln(f_t #t), -inf where zero.
  std::vector<double> log_a(count), log_b(count);
  for (int i = 0; i < count; ++i) {
    const SpinLabel j = spin(base + 2 * i);
    const LogWeight a = log_f(j, n, p1);
    const LogWeight b = log_f(j, n, p2);
    const double lm = log_multiplicity_irrep(j, n);
    log_a[i] = a.is_zero() ? -std::numeric_limits<double>::infinity() : a.log_magnitude + lm;
    log_b[i] = b.is_zero() ? -std::numeric_limits<double>::infinity() : b.log_magnitude + lm;
  }
  double cutoff = -std::numeric_limits<double>::infinity();
  if (options.truncate && n > options.truncation_min_n) {
    const double top = *std::max_element(log_a.begin(), log_a.end()) +
                       *std::max_element(log_b.begin(), log_b.end());
    cutoff = top + std::log(options.truncation_epsilon);
  }

  auto work = [&](int i) {
    std::vector<double> out;
    const SpinLabel s = spin(base + 2 * i);
    for (int k = 0; k < count; ++k) {
      const double lw = log_a[i] + log_b[k];
      if (!std::isfinite(lw) || lw < cutoff) continue;
      const SpinLabel t = spin(base + 2 * k);
      const PairContext ctx = make_pair_context(s, t, n, p1, p2);
      const int tq_lo = std::abs(std::abs(t.twice() - s.twice()) - 1);
      for (int tq = tq_lo; tq <= s.twice() + t.twice() + 1; tq += 2) {
        const SpinLabel q = spin(tq);
        const SectorKey key{s, t, q, classify_sector(s, t, q)};
        const Lambdas lam = block_lambdas(assemble_block(key, ctx));
        const double w = std::exp(lw + std::log(static_cast<double>(q.dimension())));
        out.push_back(w * lam.plus);
        if (lam.two) out.push_back(w * lam.minus);
      }
    }
    return out;
  };

  const int threads =
      std::max(1, std::min(options.threads > 0 ? options.threads : default_thread_count(), count));
  std::vector<std::vector<double>> per_s(count);
  if (threads == 1) {
    for (int i = 0; i < count; ++i) per_s[i] = work(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < count; i += threads) per_s[i] = work(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  std::vector<double> terms;
  for (auto& v : per_s) terms.insert(terms.end(), v.begin(), v.end());
  return terms;
}

double positive_part_sum(const std::vector<double>& terms, double zero_tolerance) {
  double largest = 0.0;
  for (double t : terms) largest = std::max(largest, std::abs(t));
  const double floor = zero_tolerance * largest;
  std::vector<double> positive;
  for (double t : terms) {
    if (t > floor) positive.push_back(t);
  }
  return stable_sum(std::move(positive));
}

}  // namespace

const char* to_string(Branch branch) {
  switch (branch) {
    case Branch::Single: return "single";
    case Branch::Plus: return "plus";
    case Branch::Minus: return "minus";
  }
  return "?";
}

double SpectrumEntry::weighted() const {
  if (scale.is_zero() || multiplicity == 0 || eigenvalue == 0.0) return 0.0;
  return scale.sign * eigenvalue *
         std::exp(scale.log_magnitude + std::log(static_cast<double>(multiplicity)));
}

int default_thread_count() {
  if (const char* env = std::getenv("QLEARN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

ThetaBlock theta_block(const SectorKey& sector, int n, const PriorScenario& scenario) {
  require_factorizing(scenario);
  validate(scenario);
  const PairContext ctx =
      make_pair_context(sector.s, sector.t, n, first_template(scenario), second_template(scenario));
  return assemble_block(sector, ctx);
}

ThetaBlock theta_block_general(const SectorKey& sector, int n, const PriorScenario& scenario) {
  require_factorizing(scenario);
  const PairContext ctx =
      make_pair_context(sector.s, sector.t, n, first_template(scenario), second_template(scenario));
  ThetaBlock block;
  block.sector = sector;
  block.scale = ctx.scale;
  block.is_2x2 = sector.case_tag == CaseTag::D;
  if (ctx.scale.is_zero()) return block;
  fill_case_d(block, ctx);
  if (!block.is_2x2) {
    block.lam_pm = 0.0;
    if (sector.case_tag == CaseTag::C) {
      block.lam_pp = 0.0;
    } else {
      block.lam_mm = 0.0;
    }
  }
  return block;
}

std::vector<SpectrumEntry> block_eigenvalues(const ThetaBlock& block, int n) {
  const BigCount mult = sector_multiplicity(block.sector, n);
  const Lambdas lam = block_lambdas(block);
  if (!lam.two) {
    return {SpectrumEntry{block.sector, Branch::Single, lam.plus, mult, block.scale}};
  }
  return {SpectrumEntry{block.sector, Branch::Plus, lam.plus, mult, block.scale},
          SpectrumEntry{block.sector, Branch::Minus, lam.minus, mult, block.scale}};
}

std::pair<double, double> case_d_eigenvalues_ab(const SectorKey& sector, int n,
                                                const PriorScenario& scenario) {
  require_factorizing(scenario);
  if (sector.case_tag != CaseTag::D) {
    throw std::invalid_argument("case_d_eigenvalues_ab: sector is not case D");
  }
  const PurityPrior p1 = first_template(scenario);
  const PurityPrior p2 = second_template(scenario);
  const double a = 0.5 * (ratio_R(sector.s, n, Sign::Plus, p1) +
                          ratio_R(sector.s, n, Sign::Minus, p1) -
                          ratio_R(sector.t, n, Sign::Plus, p2) -
                          ratio_R(sector.t, n, Sign::Minus, p2));
  // Rescaled gaps G_j / f_j = R_{j,+} - R_{j,-}. With orthonormal recoupling
  // rows the radicand is (gs + gt)^2 - 4 gs gt C_{++}^2.
  const double gs = gap_G(sector.s, n, p1) / f(sector.s, n, p1);
  const double gt = gap_G(sector.t, n, p2) / f(sector.t, n, p2);
  const double cpp = recoupling_C(sector.s, sector.t, sector.q, Sign::Plus, Sign::Plus);
  const double radicand = (gs + gt) * (gs + gt) - 4.0 * gs * gt * cpp * cpp;
  const double b = 0.5 * std::sqrt(std::max(0.0, radicand));
  return {a + b, a - b};
}

double phi_overlap(SpinLabel q, int n, double theta) {
  if (n < 1) throw std::invalid_argument("phi_overlap: n must be positive");
  if (q.twice() < 1 || q.twice() > 2 * n + 1 || q.twice() % 2 == 0) {
    throw std::invalid_argument("phi_overlap: q outside the s = t = n/2 sector");
  }
  // Success probability cos^2((pi - theta)/2) = sin^2(theta/2).
  const double log_p = 2.0 * std::log(std::abs(std::sin(theta / 2.0)));
  const double log_1mp = 2.0 * std::log(std::abs(std::cos(theta / 2.0)));
  const SpinLabel j1 = spin(n + 1);
  const SpinLabel j2 = spin(n);
  std::vector<double> terms;
  for (int th = -n; th <= n; th += 2) {
    const int k = (n + th) / 2;  // n/2 + h
    if (k > 0 && !std::isfinite(log_p)) continue;
    if (n - k > 0 && !std::isfinite(log_1mp)) continue;
    const double cg = clebsch_gordan(j1, Projection{n + 1}, j2, Projection{th}, q,
                                     Projection{n + 1 + th});
    if (cg == 0.0) continue;
    double l = log_factorial(n) - log_factorial(k) - log_factorial(n - k);
    if (k > 0) l += k * log_p;
    if (n - k > 0) l += (n - k) * log_1mp;
    l += 2.0 * std::log(std::abs(cg)) - std::log(static_cast<double>(q.dimension()));
    terms.push_back(std::exp(l));
  }
  return stable_sum(std::move(terms));
}

std::vector<SpectrumEntry> overlap_eigenvalues(SpinLabel q, int n, double theta) {
  const SectorKey key = top_sector(q, n);
  const BigCount mult = static_cast<BigCount>(q.dimension());
  const LogWeight unit = LogWeight::from_log(0.0);
  if (key.case_tag == CaseTag::A) {
    return {SpectrumEntry{key, Branch::Single, 0.0, mult, unit}};
  }
  const double c_pm = std::abs(recoupling_C(key.s, key.t, q, Sign::Plus, Sign::Minus));
  const double lam = phi_overlap(q, n, theta) * c_pm;
  return {SpectrumEntry{key, Branch::Plus, lam, mult, unit},
          SpectrumEntry{key, Branch::Minus, -lam, mult, unit}};
}

double p_err_exact(int n, const PriorScenario& scenario, const EngineOptions& options) {
  if (n < 1) throw std::invalid_argument("p_err_min: n must be at least 1");
  validate(scenario);
  std::vector<double> terms;
  if (const auto angle = overlap_angle(scenario)) {
    terms = overlap_weighted_terms(n, angle->theta);
  } else {
    terms = factorized_weighted_terms(n, scenario, options);
  }
  return 0.5 - 0.5 * positive_part_sum(terms, options.zero_tolerance);
}

ErrorReport p_err_min(int n, const PriorScenario& scenario, const EngineOptions& options) {
  ErrorReport report;
  report.n = n;
  report.scenario = scenario;
  report.p_exact = p_err_exact(n, scenario, options);
  if (const auto est = p_asym(n, scenario)) report.p_asymptotic = est->value();
  // At fixed overlap the baseline is the pure-state Helstrom error at that
  // angle in every dimension.
  if (const auto angle = overlap_angle(scenario)) {
    report.helstrom = helstrom_pure(angle->theta);
  } else {
    report.helstrom = helstrom_avg(scenario);
  }
  report.excess_risk = report.p_exact - report.helstrom;
  if (report.excess_risk < -1e-10) {
    throw std::logic_error("p_err_min: exact error below the Helstrom baseline for " +
                           describe(scenario));
  }
  return report;
}

double excess_risk(int n, const PriorScenario& scenario, const EngineOptions& options) {
  return p_err_min(n, scenario, options).excess_risk;
}

std::vector<SpectrumEntry> spectrum_report(int n, const PriorScenario& scenario) {
  if (n < 1) throw std::invalid_argument("spectrum_report: n must be at least 1");
  if (n > kSpectrumReportCap) {
    throw std::domain_error("spectrum_report: n exceeds the cap of " +
                            std::to_string(kSpectrumReportCap));
  }
  validate(scenario);
  std::vector<SpectrumEntry> entries;
  if (const auto angle = overlap_angle(scenario)) {
    for (int tq = 1; tq <= 2 * n + 1; tq += 2) {
      auto e = overlap_eigenvalues(spin(tq), n, angle->theta);
      entries.insert(entries.end(), e.begin(), e.end());
    }
    return entries;
  }
  const PurityPrior p1 = first_template(scenario);
  const PurityPrior p2 = second_template(scenario);
  SpinLabel last_s = spin(0), last_t = spin(0);
  bool have_ctx = false;
  PairContext ctx;
  for (const SectorKey& key : enumerate_sectors(n)) {
    if (!have_ctx || key.s != last_s || key.t != last_t) {
      ctx = make_pair_context(key.s, key.t, n, p1, p2);
      last_s = key.s;
      last_t = key.t;
      have_ctx = true;
    }
    auto e = block_eigenvalues(assemble_block(key, ctx), n);
    entries.insert(entries.end(), e.begin(), e.end());
  }
  return entries;
}

}  // namespace qlearn
