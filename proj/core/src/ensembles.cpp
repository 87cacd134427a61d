#include "qprlab/ensembles.hpp"

#include <Eigen/QR>
#include <numeric>

#include "qprlab/rng.hpp"

namespace qprlab {

bool PermutationTable::is_bijection() const {
  const std::size_t d = static_cast<std::size_t>(domain_size());
  if (forward.size() != d || inverse.size() != d) return false;
  for (std::size_t i = 0; i < d; ++i) {
    if (forward[i] >= d || inverse[i] >= d) return false;
    if (inverse[forward[i]] != i) return false;
  }
  return true;
}

Statevector sample_haar_state(int num_qubits, std::uint64_t seed) {
  if (num_qubits < 1 || num_qubits > kMaxStateQubits)
    throw BudgetError("sample_haar_state: qubit count outside budget");
  Rng rng(seed);
  Vector v(dim_of(num_qubits));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = Complex(rng.next_gaussian(), rng.next_gaussian());
  v.normalize();
  return Statevector(num_qubits, std::move(v));
}

UnitaryMatrix sample_haar_unitary(int num_qubits, std::uint64_t seed) {
  if (num_qubits < 1 || num_qubits > 10)
    throw BudgetError("sample_haar_unitary: qubit count outside budget");
  Rng rng(seed);
  const std::int64_t d = dim_of(num_qubits);
  Matrix g(d, d);
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j)
      g(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is exactly Haar.
  for (std::int64_t j = 0; j < d; ++j) {
    Complex rjj = r(j, j);
    Complex phase = rjj == Complex(0, 0) ? Complex(1, 0) : rjj / std::abs(rjj);
    q.col(j) *= phase;
  }
  return UnitaryMatrix(num_qubits, std::move(q));
}

BooleanFunctionTable sample_random_function(int ell, std::uint64_t seed) {
  if (ell < 0 || ell > 20)
    throw BudgetError("sample_random_function: ell outside budget");
  Rng rng(seed);
  BooleanFunctionTable f;
  f.ell = ell;
  f.table.resize(std::size_t{1} << ell);
  for (auto& b : f.table) b = rng.next_bit() ? 1 : 0;
  return f;
}

PermutationTable sample_random_permutation(int ell, std::uint64_t seed) {
  if (ell < 0 || ell > 20)
    throw BudgetError("sample_random_permutation: ell outside budget");
  Rng rng(seed);
  PermutationTable p;
  p.ell = ell;
  const std::size_t d = std::size_t{1} << ell;
  p.forward.resize(d);
  std::iota(p.forward.begin(), p.forward.end(), 0u);
  for (std::size_t i = d; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(p.forward[i - 1], p.forward[j]);
  }
  p.inverse.resize(d);
  for (std::size_t i = 0; i < d; ++i) p.inverse[p.forward[i]] = static_cast<std::uint32_t>(i);
  return p;
}

DensityMatrix sample_random_density(int num_qubits, std::uint64_t seed) {
  if (num_qubits < 1 || num_qubits > 10)
    throw BudgetError("sample_random_density: qubit count outside budget");
  Rng rng(seed);
  const std::int64_t d = dim_of(num_qubits);
  Matrix g(d, d);
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j)
      g(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(num_qubits, std::move(rho));
}

}  // namespace qprlab
