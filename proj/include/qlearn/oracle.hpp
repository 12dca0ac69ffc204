#pragma once

// Brute-force minimal error for n <= 2 from dense operators.
//
// Basis convention on the (2n+1)-qubit space: qubits 0..n-1 hold the first
// training set (A), qubit n the test system (X), qubits n+1..2n the second
// training set (B). Qubit k is bit k of the basis index.

#include <array>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include "qlearn/priors.hpp"

namespace qlearn {

using Complex = std::complex<double>;

class DenseOperator {
public:
  DenseOperator() = default;
  explicit DenseOperator(int qubits);

  static DenseOperator identity(int qubits);
  /// Single-qubit operator from its 2x2 entries, row-major.
  static DenseOperator qubit(const std::array<Complex, 4>& entries);

  int qubits() const { return qubits_; }
  int dim() const { return dim_; }

  Complex& operator()(int row, int col) { return data_[static_cast<std::size_t>(row) * dim_ + col]; }
  Complex operator()(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * dim_ + col];
  }

  Complex trace() const;
  DenseOperator adjoint() const;
  /// Largest entry modulus.
  double max_norm() const;
  /// max |X - X^dagger|.
  double hermiticity_defect() const;

  DenseOperator& operator+=(const DenseOperator& other);
  DenseOperator& operator-=(const DenseOperator& other);
  DenseOperator& operator*=(Complex factor);

  friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
  friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
  friend DenseOperator operator*(DenseOperator a, Complex factor) { return a *= factor; }
  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);

private:
  int qubits_ = 0;
  int dim_ = 1;
  std::vector<Complex> data_ = {Complex{0.0}};
};

/// low acts on the low-order qubits, high on the following ones.
DenseOperator kron(const DenseOperator& low, const DenseOperator& high);

/// op^{tensor m}.
DenseOperator tensor_power(const DenseOperator& op, int m);

/// Permutation operators and Gram matrix of S_m acting on m qubits.
class TwirlBasis {
public:
  /// Throws std::invalid_argument when m < 1 or m > 5.
  explicit TwirlBasis(int m);

  int m() const { return m_; }
  std::size_t size() const { return perms_.size(); }
  const std::vector<int>& permutation(std::size_t i) const { return perms_[i]; }
  /// Basis index image of `index` under P_sigma.
  int apply(std::size_t i, int index) const;
  DenseOperator operator_for(std::size_t i) const;
  double gram(std::size_t i, std::size_t j) const { return gram_[i * perms_.size() + j]; }

private:
  int m_;
  std::vector<std::vector<int>> perms_;
  std::vector<double> gram_;
};

/// Haar average of U^{tensor m} op U^{dagger tensor m}, as the
/// Hilbert-Schmidt projection of op onto span{P_sigma}.
DenseOperator twirl(const DenseOperator& op, int m);

/// Eigenvalues of a Hermitian matrix in ascending order (cyclic Jacobi).
std::vector<double> hermitian_eigenvalues(const DenseOperator& op);

/// Eigenvalues of a real symmetric n x n matrix in ascending order.
std::vector<double> symmetric_eigenvalues(std::vector<double> matrix, int n,
                                          std::vector<double>* eigenvectors = nullptr);

/// Haar-random SU(2) element.
DenseOperator haar_su2(std::mt19937_64& rng);

/// exp(-i sigma_y (pi - theta) / 2), the rotation carrying the first pure
/// template onto the second.
DenseOperator overlap_rotation(double theta);

/// (1 + r sigma_z) / 2.
DenseOperator bloch_state(double r);

/// Orientation-averaged m-copy state for a template prior.
DenseOperator averaged_copies(const PurityPrior& prior, int m);

/// Dense alpha and beta. Requires n in {1, 2}.
std::pair<DenseOperator, DenseOperator> alpha_beta_dense(int n, const PriorScenario& scenario);

/// 1/2 - 1/4 ||alpha - beta||_1 by dense diagonalization. Requires n <= 2.
double p_err_oracle(int n, const PriorScenario& scenario);

/// Swap of the A and B registers, qubit k <-> qubit n+1+k.
DenseOperator swap_ab(const DenseOperator& op, int n);

/// max |S Theta S^dagger + Theta|. Rejects fixed purities with r1 != r2.
double swap_antisymmetry_residual(int n, const PriorScenario& scenario);

}  // namespace qlearn
