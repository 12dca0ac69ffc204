#pragma once

// SU(2) angular-momentum algebra for the (s, t, q) sector decomposition of
// the A X B register: irrep multiplicities, Clebsch-Gordan and 6j
// coefficients, recoupling between (AX)B and A(XB), sector enumeration.
//
// Spins are stored doubled so half-integers are exact. Condon-Shortley
// phases throughout.

#include <compare>
#include <string>
#include <vector>

#include "qlearn/numeric.hpp"

namespace qlearn {

/// Non-negative spin j, stored as 2j.
class SpinLabel {
public:
  constexpr SpinLabel() = default;

  /// Throws std::invalid_argument when twice < 0.
  static SpinLabel from_twice(int twice);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  /// 2j + 1
  constexpr int dimension() const { return twice_ + 1; }

  SpinLabel plus_half() const { return from_twice(twice_ + 1); }
  /// Throws when the result would be negative.
  SpinLabel minus_half() const { return from_twice(twice_ - 1); }

  friend constexpr auto operator<=>(SpinLabel, SpinLabel) = default;

  std::string str() const;

private:
  constexpr explicit SpinLabel(int twice) : twice_(twice) {}
  int twice_ = 0;
};

/// Shorthand for the half-integer j = twice / 2.
inline SpinLabel spin(int twice) { return SpinLabel::from_twice(twice); }

/// Signed magnetic quantum number, stored as 2m.
struct Projection {
  int twice = 0;
  friend constexpr auto operator<=>(Projection, Projection) = default;
};

enum class CaseTag { A, B, C, D };

const char* to_string(CaseTag tag);

struct SectorKey {
  SpinLabel s;
  SpinLabel t;
  SpinLabel q;
  CaseTag case_tag = CaseTag::D;

  friend constexpr bool operator==(const SectorKey&, const SectorKey&) = default;
};

/// The four overlaps <s+a/2, t; q | s, t+b/2; q> for a, b in {+, -}.
/// Entries whose coupled states do not exist are 0.
struct RecouplingRow {
  double c_pp = 0.0;
  double c_pm = 0.0;
  double c_mp = 0.0;
  double c_mm = 0.0;
};

enum class Sign { Plus = 1, Minus = -1 };

inline int to_int(Sign s) { return static_cast<int>(s); }

/// Number of spin-j irreps in n spin-1/2 particles (Catalan triangle).
/// Zero when 2j > n or n - 2j is odd. Exact for n <= 127.
BigCount multiplicity_irrep(SpinLabel j, int n);

/// ln #(j, n); -infinity when the multiplicity is zero. Valid for any n.
double log_multiplicity_irrep(SpinLabel j, int n);

/// (2q + 1) #(s, n) #(t, n). Exact for n <= 62.
BigCount sector_multiplicity(const SectorKey& key, int n);

/// True when (a, b, c) satisfy the triangle rule and a + b + c is integral.
bool triangle(SpinLabel a, SpinLabel b, SpinLabel c);

/// <j1 m1 j2 m2 | J M>, Condon-Shortley convention.
double clebsch_gordan(SpinLabel j1, Projection m1, SpinLabel j2, Projection m2, SpinLabel J,
                      Projection M);

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6} by the Racah formula in log space.
/// Non-triangular arguments give 0.
double wigner6j(SpinLabel j1, SpinLabel j2, SpinLabel j3, SpinLabel j4, SpinLabel j5,
                SpinLabel j6);

/// C^{(s,t,q)}_{ab} = (-1)^{a/2+b/2} sqrt((2s'+1)(2t'+1)) {t' t 1/2; s' s q}
/// with s' = s + a/2, t' = t + b/2.
double recoupling_C(SpinLabel s, SpinLabel t, SpinLabel q, Sign a, Sign b);

RecouplingRow recoupling_row(SpinLabel s, SpinLabel t, SpinLabel q);

/// True when q is reachable by coupling s, 1/2 and t.
bool sector_allowed(SpinLabel s, SpinLabel t, SpinLabel q);

/// Throws std::invalid_argument when q is outside the coupling range.
CaseTag classify_sector(SpinLabel s, SpinLabel t, SpinLabel q);

/// Every (s, t, q) sector of the 2n+1 qubit register, ordered by s, then t,
/// then q.
std::vector<SectorKey> enumerate_sectors(int n);

}  // namespace qlearn
