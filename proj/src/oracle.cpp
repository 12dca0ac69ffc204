#include "qlearn/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace qlearn {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kJacobiThreshold = 1e-14;
constexpr double kPseudoInverseCutoff = 1e-10;

void require_same_shape(const DenseOperator& a, const DenseOperator& b) {
  if (a.qubits() != b.qubits()) throw std::invalid_argument("DenseOperator: shape mismatch");
}

void require_small_n(int n) {
  if (n < 1 || n > 2) throw std::invalid_argument("dense oracle supports n in {1, 2} only");
}

double overlap_theta(const PriorScenario& scenario) {
  if (const auto* fo = std::get_if<FixedOverlap>(&scenario)) return fo->theta;
  return std::get<FixedOverlapDim>(scenario).theta;
}

bool is_overlap(const PriorScenario& scenario) {
  return std::holds_alternative<FixedOverlap>(scenario) ||
         std::holds_alternative<FixedOverlapDim>(scenario);
}

DenseOperator projector(const DenseOperator& u) {
  // u |up><up| u^dagger
  DenseOperator p(1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) p(i, j) = u(i, 0) * std::conj(u(j, 0));
  }
  return p;
}

}  // namespace

DenseOperator::DenseOperator(int qubits)
    : qubits_(qubits), dim_(1 << qubits), data_(static_cast<std::size_t>(dim_) * dim_) {
  if (qubits < 0 || qubits > 12) throw std::invalid_argument("DenseOperator: unsupported size");
}

DenseOperator DenseOperator::identity(int qubits) {
  DenseOperator id(qubits);
  for (int i = 0; i < id.dim(); ++i) id(i, i) = 1.0;
  return id;
}

DenseOperator DenseOperator::qubit(const std::array<Complex, 4>& entries) {
  DenseOperator op(1);
  op(0, 0) = entries[0];
  op(0, 1) = entries[1];
  op(1, 0) = entries[2];
  op(1, 1) = entries[3];
  return op;
}

Complex DenseOperator::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

DenseOperator DenseOperator::adjoint() const {
  DenseOperator out(qubits_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

double DenseOperator::max_norm() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double DenseOperator::hermiticity_defect() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return m;
}

DenseOperator& DenseOperator::operator+=(const DenseOperator& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseOperator& DenseOperator::operator-=(const DenseOperator& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseOperator& DenseOperator::operator*=(Complex factor) {
  for (Complex& z : data_) z *= factor;
  return *this;
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  require_same_shape(a, b);
  DenseOperator out(a.qubits());
  const int d = a.dim();
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      const Complex aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < d; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

DenseOperator kron(const DenseOperator& low, const DenseOperator& high) {
  DenseOperator out(low.qubits() + high.qubits());
  const int dl = low.dim();
  for (int hi = 0; hi < high.dim(); ++hi) {
    for (int hj = 0; hj < high.dim(); ++hj) {
      const Complex h = high(hi, hj);
      if (h == 0.0) continue;
      for (int li = 0; li < dl; ++li) {
        for (int lj = 0; lj < dl; ++lj) out(hi * dl + li, hj * dl + lj) = h * low(li, lj);
      }
    }
  }
  return out;
}

DenseOperator tensor_power(const DenseOperator& op, int m) {
  if (m < 0) throw std::invalid_argument("tensor_power: negative exponent");
  DenseOperator out = DenseOperator::identity(0);
  for (int k = 0; k < m; ++k) out = kron(out, op);
  return out;
}

TwirlBasis::TwirlBasis(int m) : m_(m) {
  if (m < 1 || m > 5) throw std::invalid_argument("twirl: m must lie in [1, 5]");
  std::vector<int> sigma(m);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    perms_.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  const std::size_t k = perms_.size();
  const int d = 1 << m;
  gram_.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      int fixed = 0;
      for (int b = 0; b < d; ++b) fixed += apply(i, b) == apply(j, b) ? 1 : 0;
      gram_[i * k + j] = fixed;
    }
  }
}

int TwirlBasis::apply(std::size_t i, int index) const {
  const std::vector<int>& sigma = perms_[i];
  int out = 0;
  for (int k = 0; k < m_; ++k) {
    if (index & (1 << k)) out |= 1 << sigma[k];
  }
  return out;
}

DenseOperator TwirlBasis::operator_for(std::size_t i) const {
  DenseOperator p(m_);
  for (int b = 0; b < p.dim(); ++b) p(apply(i, b), b) = 1.0;
  return p;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n,
                                          std::vector<double>* eigenvectors) {
  if (static_cast<int>(a.size()) != n * n) {
    throw std::invalid_argument("symmetric_eigenvalues: size mismatch");
  }
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(at(i, j)));
    }
    if (off <= kJacobiThreshold * std::max(scale, 1e-300)) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double tau = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return at(x, x) < at(y, y); });
  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) values[i] = at(order[i], order[i]);
  if (eigenvectors) {
    eigenvectors->assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int col = 0; col < n; ++col) {
      for (int k = 0; k < n; ++k) (*eigenvectors)[k * n + col] = v[k * n + order[col]];
    }
  }
  return values;
}

std::vector<double> hermitian_eigenvalues(const DenseOperator& op) {
  // Real embedding [[Re, -Im], [Im, Re]] doubles every eigenvalue.
  const int d = op.dim();
  const int n = 2 * d;
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Complex z = 0.5 * (op(i, j) + std::conj(op(j, i)));
      a[i * n + j] = z.real();
      a[(i + d) * n + (j + d)] = z.real();
      a[i * n + (j + d)] = -z.imag();
      a[(i + d) * n + j] = z.imag();
    }
  }
  const std::vector<double> doubled = symmetric_eigenvalues(std::move(a), n);
  std::vector<double> values(d);
  for (int i = 0; i < d; ++i) values[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return values;
}

DenseOperator twirl(const DenseOperator& op, int m) {
  if (op.qubits() != m) throw std::invalid_argument("twirl: operator size does not match m");
  const TwirlBasis basis(m);
  const std::size_t k = basis.size();
  const int d = op.dim();

  std::vector<Complex> rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    Complex v = 0.0;
    for (int b = 0; b < d; ++b) v += op(basis.apply(i, b), b);
    rhs[i] = v;
  }

  std::vector<double> gram(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gram[i * k + j] = basis.gram(i, j);
  }
  std::vector<double> vecs;
  const std::vector<double> evals = symmetric_eigenvalues(gram, static_cast<int>(k), &vecs);
  const double top = *std::max_element(evals.begin(), evals.end());

  // c = V D^+ V^T rhs
  std::vector<Complex> proj(k, 0.0);
  for (std::size_t e = 0; e < k; ++e) {
    if (evals[e] <= kPseudoInverseCutoff * top) continue;
    Complex dot = 0.0;
    for (std::size_t i = 0; i < k; ++i) dot += vecs[i * k + e] * rhs[i];
    proj[e] = dot / evals[e];
  }
  std::vector<Complex> coeff(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t e = 0; e < k; ++e) coeff[i] += vecs[i * k + e] * proj[e];
  }

  DenseOperator out(m);
  for (std::size_t i = 0; i < k; ++i) {
    for (int b = 0; b < d; ++b) out(basis.apply(i, b), b) += coeff[i];
  }
  return out;
}

DenseOperator haar_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double q[4];
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : q) {
      x = normal(rng);
      norm += x * x;
    }
  } while (norm < 1e-24);
  norm = std::sqrt(norm);
  const Complex a{q[0] / norm, q[1] / norm};
  const Complex b{q[2] / norm, q[3] / norm};
  return DenseOperator::qubit({a, -std::conj(b), b, std::conj(a)});
}

DenseOperator overlap_rotation(double theta) {
  const double x = 0.5 * (kPi - theta);
  return DenseOperator::qubit({std::cos(x), -std::sin(x), std::sin(x), std::cos(x)});
}

DenseOperator bloch_state(double r) {
  return DenseOperator::qubit({0.5 * (1.0 + r), 0.0, 0.0, 0.5 * (1.0 - r)});
}

DenseOperator averaged_copies(const PurityPrior& prior, int m) {
  if (const auto* fp = std::get_if<FixedPurity>(&prior)) {
    return twirl(tensor_power(bloch_state(fp->r), m), m);
  }
  // Integrate the diagonal of rho(r)^{tensor m} against 3 r^2 dr.
  DenseOperator mixed(m);
  for (int b = 0; b < mixed.dim(); ++b) {
    const int down = std::popcount(static_cast<unsigned>(b));
    const int up = m - down;
    mixed(b, b) = boost::math::quadrature::gauss<double, 64>::integrate(
        [up, down](double r) {
          return 3.0 * r * r * std::pow(0.5 * (1.0 + r), up) * std::pow(0.5 * (1.0 - r), down);
        },
        0.0, 1.0);
  }
  return twirl(mixed, m);
}

std::pair<DenseOperator, DenseOperator> alpha_beta_dense(int n, const PriorScenario& scenario) {
  require_small_n(n);
  validate(scenario);
  if (is_overlap(scenario)) {
    const DenseOperator p1 = projector(DenseOperator::identity(1));
    const DenseOperator p2 = projector(overlap_rotation(overlap_theta(scenario)));
    const int m = 2 * n + 1;
    DenseOperator alpha = twirl(kron(tensor_power(p1, n + 1), tensor_power(p2, n)), m);
    DenseOperator beta = twirl(kron(tensor_power(p1, n), tensor_power(p2, n + 1)), m);
    return {std::move(alpha), std::move(beta)};
  }
  const PurityPrior t1 = first_template(scenario);
  const PurityPrior t2 = second_template(scenario);
  DenseOperator alpha = kron(averaged_copies(t1, n + 1), averaged_copies(t2, n));
  DenseOperator beta = kron(averaged_copies(t1, n), averaged_copies(t2, n + 1));
  return {std::move(alpha), std::move(beta)};
}

double p_err_oracle(int n, const PriorScenario& scenario) {
  const auto [alpha, beta] = alpha_beta_dense(n, scenario);
  double norm = 0.0;
  for (double e : hermitian_eigenvalues(alpha - beta)) norm += std::abs(e);
  return 0.5 - 0.25 * norm;
}

DenseOperator swap_ab(const DenseOperator& op, int n) {
  if (op.qubits() != 2 * n + 1) throw std::invalid_argument("swap_ab: wrong register size");
  auto map = [n](int index) {
    int out = index & (1 << n);
    for (int k = 0; k < n; ++k) {
      if (index & (1 << k)) out |= 1 << (n + 1 + k);
      if (index & (1 << (n + 1 + k))) out |= 1 << k;
    }
    return out;
  };
  DenseOperator out(op.qubits());
  for (int i = 0; i < op.dim(); ++i) {
    for (int j = 0; j < op.dim(); ++j) out(map(i), map(j)) = op(i, j);
  }
  return out;
}

double swap_antisymmetry_residual(int n, const PriorScenario& scenario) {
  if (const auto* fp = std::get_if<FixedPurities>(&scenario)) {
    if (fp->r1 != fp->r2) {
      throw std::invalid_argument("swap antisymmetry needs r1 == r2 for fixed purities");
    }
  }
  const auto [alpha, beta] = alpha_beta_dense(n, scenario);
  const DenseOperator theta = alpha - beta;
  return (swap_ab(theta, n) + theta).max_norm();
}

}  // namespace qlearn
