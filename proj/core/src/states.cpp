#include "qprlab/states.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qprlab {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kHermTol = 1e-10;
constexpr double kUnitaryTol = 1e-9;

}  // namespace

Statevector::Statevector(int num_qubits, Vector amplitudes)
    : num_qubits_(num_qubits), amp_(std::move(amplitudes)) {
  if (num_qubits_ < 0 || num_qubits_ > kMaxStateQubits)
    throw BudgetError("statevector qubit count outside budget");
  if (amp_.size() != dim_of(num_qubits_))
    throw DimensionError("statevector length is not 2^n");
  double norm2 = amp_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTol)
    throw ValidationError("statevector is not normalized");
}

Statevector Statevector::computational_basis(int num_qubits,
                                             std::int64_t index) {
  Vector v = Vector::Zero(dim_of(num_qubits));
  v(index) = 1.0;
  return Statevector(num_qubits, std::move(v));
}

DensityMatrix::DensityMatrix(int num_qubits, Matrix entries)
    : num_qubits_(num_qubits), mat_(std::move(entries)) {
  std::int64_t d = dim_of(num_qubits_);
  if (mat_.rows() != d || mat_.cols() != d)
    throw DimensionError("density matrix is not 2^n x 2^n");
  double herm_dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kHermTol)
    throw ValidationError("density matrix is not Hermitian");
  if (std::abs(mat_.trace().real() - 1.0) > kHermTol ||
      std::abs(mat_.trace().imag()) > kHermTol)
    throw ValidationError("density matrix trace is not 1");
}

void DensityMatrix::validate_psd(double tol) const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw ValidationError("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const Statevector& psi) {
  Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(psi.num_qubits(), std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  std::int64_t d = dim_of(num_qubits);
  Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
  return DensityMatrix(num_qubits, std::move(m));
}

UnitaryMatrix::UnitaryMatrix(int num_qubits, Matrix entries)
    : num_qubits_(num_qubits), mat_(std::move(entries)) {
  std::int64_t d = dim_of(num_qubits_);
  if (mat_.rows() != d || mat_.cols() != d)
    throw DimensionError("unitary matrix is not 2^n x 2^n");
  Matrix dev = mat_.adjoint() * mat_ - Matrix::Identity(d, d);
  if (dev.cwiseAbs().maxCoeff() > kUnitaryTol)
    throw ValidationError("matrix is not unitary");
}

UnitaryMatrix UnitaryMatrix::identity(int num_qubits) {
  std::int64_t d = dim_of(num_qubits);
  return UnitaryMatrix(num_qubits, Matrix::Identity(d, d));
}

double fidelity(const Statevector& psi, const DensityMatrix& sigma) {
  require_same_qubits(psi.num_qubits(), sigma.num_qubits(), "fidelity");
  Complex v = psi.amplitudes().adjoint() * (sigma.entries() * psi.amplitudes());
  if (std::abs(v.imag()) > 1e-10)
    throw ValidationError("fidelity has a non-real value");
  return std::clamp(v.real(), 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_qubits(rho.num_qubits(), sigma.num_qubits(), "trace_distance");
  Matrix diff = rho.entries() - sigma.entries();
  // Hermitize to absorb accumulated rounding before the eigensolve.
  Matrix herm = 0.5 * (diff + diff.adjoint());
  if ((diff - herm).cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("trace_distance: difference is far from Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance_pure(const Statevector& psi, const Statevector& phi) {
  require_same_qubits(psi.num_qubits(), phi.num_qubits(),
                      "trace_distance_pure");
  Complex ov = psi.amplitudes().adjoint() * phi.amplitudes();
  double f = std::norm(ov);
  return std::sqrt(std::max(0.0, 1.0 - std::min(1.0, f)));
}

double l2_distance(const Statevector& psi, const Statevector& phi) {
  require_same_qubits(psi.num_qubits(), phi.num_qubits(), "l2_distance");
  return (psi.amplitudes() - phi.amplitudes()).norm();
}

Statevector multi_copy(const Statevector& psi, int m, int max_qubits) {
  if (m < 1) throw ValidationError("multi_copy needs m >= 1");
  if (psi.num_qubits() * m > max_qubits)
    throw BudgetError("multi_copy exceeds the statevector budget");
  Vector out = psi.amplitudes();
  for (int i = 1; i < m; ++i) out = kronecker(out, psi.amplitudes());
  return Statevector(psi.num_qubits() * m, std::move(out));
}

namespace {

// Splits a basis index into (kept, discarded) sub-indices given sorted
// discard positions. Qubit 0 is the least significant bit.
struct IndexSplitter {
  std::vector<int> keep, drop;

  IndexSplitter(int n, const std::set<int>& discard) {
    for (int q = 0; q < n; ++q) {
      if (discard.count(q))
        drop.push_back(q);
      else
        keep.push_back(q);
    }
  }

  std::int64_t assemble(std::int64_t kept_bits, std::int64_t drop_bits) const {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < keep.size(); ++i)
      idx |= ((kept_bits >> i) & 1) << keep[i];
    for (std::size_t i = 0; i < drop.size(); ++i)
      idx |= ((drop_bits >> i) & 1) << drop[i];
    return idx;
  }
};

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::set<int>& discard) {
  int n = rho.num_qubits();
  for (int q : discard)
    if (q < 0 || q >= n) throw DimensionError("partial_trace: bad qubit index");
  IndexSplitter split(n, discard);
  int nk = static_cast<int>(split.keep.size());
  std::int64_t dk = dim_of(nk);
  std::int64_t dd = std::int64_t{1} << split.drop.size();
  Matrix out = Matrix::Zero(dk, dk);
  for (std::int64_t r = 0; r < dk; ++r)
    for (std::int64_t c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (std::int64_t x = 0; x < dd; ++x)
        acc += rho.entries()(split.assemble(r, x), split.assemble(c, x));
      out(r, c) = acc;
    }
  return DensityMatrix(nk, std::move(out));
}

DensityMatrix reduced_density(const Statevector& psi,
                              const std::set<int>& discard) {
  int n = psi.num_qubits();
  for (int q : discard)
    if (q < 0 || q >= n)
      throw DimensionError("reduced_density: bad qubit index");
  IndexSplitter split(n, discard);
  int nk = static_cast<int>(split.keep.size());
  std::int64_t dk = dim_of(nk);
  std::int64_t dd = std::int64_t{1} << split.drop.size();
  Matrix out = Matrix::Zero(dk, dk);
  for (std::int64_t x = 0; x < dd; ++x) {
    for (std::int64_t r = 0; r < dk; ++r) {
      Complex ar = psi.amplitude(split.assemble(r, x));
      if (ar == Complex(0.0, 0.0)) continue;
      for (std::int64_t c = 0; c < dk; ++c)
        out(r, c) += ar * std::conj(psi.amplitude(split.assemble(c, x)));
    }
  }
  return DensityMatrix(nk, std::move(out));
}

DensityMatrix haar_moment_state(int num_qubits, int copies,
                                std::int64_t max_dim) {
  if (copies < 1) throw ValidationError("haar_moment_state needs m >= 1");
  std::int64_t base = dim_of(num_qubits);
  std::int64_t total = 1;
  for (int i = 0; i < copies; ++i) {
    total *= base;
    if (total > max_dim)
      throw BudgetError("haar_moment_state exceeds the moment matrix budget");
  }

  // Assemble the projector from symmetrized basis vectors: one normalized
  // vector per multiset of single-copy indices.
  Matrix proj = Matrix::Zero(total, total);
  std::vector<std::int64_t> tuple(copies, 0);
  std::vector<std::int64_t> scratch;
  std::int64_t sym_dim = 0;
  for (;;) {
    scratch.assign(tuple.begin(), tuple.end());
    std::vector<std::int64_t> indices;
    do {
      std::int64_t idx = 0;
      for (std::int64_t digit : scratch) idx = idx * base + digit;
      indices.push_back(idx);
    } while (std::next_permutation(scratch.begin(), scratch.end()));
    double w = 1.0 / static_cast<double>(indices.size());
    for (std::int64_t r : indices)
      for (std::int64_t c : indices) proj(r, c) += w;
    ++sym_dim;

    // Next non-decreasing tuple.
    int pos = copies - 1;
    while (pos >= 0 && tuple[pos] == base - 1) --pos;
    if (pos < 0) break;
    std::int64_t v = tuple[pos] + 1;
    for (int i = pos; i < copies; ++i) tuple[i] = v;
  }

  std::int64_t expected_dim = binomial(base + copies - 1, copies);
  if (sym_dim != expected_dim)
    throw ValidationError("symmetric subspace dimension mismatch");
  proj /= static_cast<double>(sym_dim);
  return DensityMatrix(num_qubits * copies, std::move(proj));
}

double diamond_distance_unitary(const UnitaryMatrix& u,
                                const UnitaryMatrix& v) {
  require_same_qubits(u.num_qubits(), v.num_qubits(),
                      "diamond_distance_unitary");
  Matrix w = u.entries().adjoint() * v.entries();
  Eigen::ComplexEigenSolver<Matrix> es(w, false);
  std::vector<double> angles;
  angles.reserve(static_cast<std::size_t>(es.eigenvalues().size()));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    angles.push_back(std::arg(es.eigenvalues()(i)));
  std::sort(angles.begin(), angles.end());

  // Eigenvalues lie on the unit circle. The hull contains the origin iff no
  // angular gap exceeds pi; otherwise the nearest hull point sits on the
  // chord across the widest gap.
  double max_gap = 0.0;
  std::size_t k = angles.size();
  for (std::size_t i = 0; i < k; ++i) {
    double next = (i + 1 < k) ? angles[i + 1] : angles[0] + 2.0 * M_PI;
    max_gap = std::max(max_gap, next - angles[i]);
  }
  double nu = 0.0;
  if (max_gap > M_PI) {
    double spread = 2.0 * M_PI - max_gap;
    nu = std::cos(spread / 2.0);
  }
  double val = 2.0 * std::sqrt(std::max(0.0, 1.0 - nu * nu));
  return std::min(2.0, val);
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kronecker(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace qprlab
