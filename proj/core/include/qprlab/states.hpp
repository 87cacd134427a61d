#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <set>
#include <vector>

#include "qprlab/errors.hpp"

namespace qprlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Memory budgets. Desk scale: statevectors up to 2^22 amplitudes, exact
// moment matrices up to dimension 4096.
inline constexpr int kMaxStateQubits = 22;
inline constexpr std::int64_t kMaxMomentDim = 4096;

inline std::int64_t dim_of(int num_qubits) {
  return std::int64_t{1} << num_qubits;
}

// Pure n-qubit state: 2^n complex amplitudes, unit norm within 1e-10.
class Statevector {
 public:
  Statevector(int num_qubits, Vector amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::int64_t dim() const { return amp_.size(); }
  const Vector& amplitudes() const { return amp_; }
  Complex amplitude(std::int64_t i) const { return amp_(i); }

  static Statevector computational_basis(int num_qubits, std::int64_t index);
  static Statevector zero_state(int num_qubits) {
    return computational_basis(num_qubits, 0);
  }

 private:
  int num_qubits_;
  Vector amp_;
};

// Mixed n-qubit state: Hermitian, unit trace. Construction checks hermiticity
// and trace entrywise; positivity needs an eigendecomposition and is checked
// by validate_psd() where a contract demands it.
class DensityMatrix {
 public:
  DensityMatrix(int num_qubits, Matrix entries);

  int num_qubits() const { return num_qubits_; }
  std::int64_t dim() const { return mat_.rows(); }
  const Matrix& entries() const { return mat_; }

  void validate_psd(double tol = 1e-9) const;

  static DensityMatrix from_pure(const Statevector& psi);
  static DensityMatrix maximally_mixed(int num_qubits);

 private:
  int num_qubits_;
  Matrix mat_;
};

// U on n qubits with U†U = I within 1e-9 in max entrywise deviation.
class UnitaryMatrix {
 public:
  UnitaryMatrix(int num_qubits, Matrix entries);

  int num_qubits() const { return num_qubits_; }
  std::int64_t dim() const { return mat_.rows(); }
  const Matrix& entries() const { return mat_; }

  static UnitaryMatrix identity(int num_qubits);

 private:
  int num_qubits_;
  Matrix mat_;
};

// --- distances and moments -------------------------------------------------

// <psi|sigma|psi>, real part; imaginary part must vanish within 1e-10.
double fidelity(const Statevector& psi, const DensityMatrix& sigma);

// 1/2 ||rho - sigma||_1 via Hermitian eigendecomposition of the difference.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// sqrt(1 - |<psi|phi>|^2); tight form of the pure-vs-pure trace distance.
double trace_distance_pure(const Statevector& psi, const Statevector& phi);

// Euclidean norm of the amplitude difference (global-phase sensitive).
double l2_distance(const Statevector& psi, const Statevector& phi);

// m-fold tensor power, n*m qubits.
Statevector multi_copy(const Statevector& psi, int m,
                       int max_qubits = kMaxStateQubits);

// Reduced state on the kept qubits; `discard` holds qubit indices.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::set<int>& discard);

// Reduced state of a pure state, computed without forming the full outer
// product.
DensityMatrix reduced_density(const Statevector& psi,
                              const std::set<int>& discard);

// E_Haar[|psi><psi|^{\otimes m}] on n*m qubits: the symmetric-subspace
// projector divided by its dimension C(2^n + m - 1, m).
DensityMatrix haar_moment_state(int num_qubits, int copies,
                                std::int64_t max_dim = kMaxMomentDim);

// Exact diamond distance between unitary channels, in [0, 2]. Computed as
// 2*sqrt(1 - nu^2) with nu the distance from the origin to the convex hull
// of the eigenvalues of U†V.
double diamond_distance_unitary(const UnitaryMatrix& u, const UnitaryMatrix& v);

// --- small helpers ----------------------------------------------------------

Matrix kronecker(const Matrix& a, const Matrix& b);
Vector kronecker(const Vector& a, const Vector& b);

inline void require_same_qubits(int a, int b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": qubit counts differ");
}

std::int64_t binomial(std::int64_t n, std::int64_t k);

}  // namespace qprlab
