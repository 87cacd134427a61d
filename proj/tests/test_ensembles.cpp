#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "qprlab/clifford.hpp"
#include "qprlab/ensembles.hpp"
#include "qprlab/rng.hpp"

using namespace qprlab;

TEST_CASE("haar state sampler: norm, determinism, first moment") {
  for (int i = 0; i < 50; ++i) {
    Statevector psi = sample_haar_state(3, derive_seed(1, 0, i));
    CHECK(psi.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  Statevector a = sample_haar_state(4, 777);
  Statevector b = sample_haar_state(4, 777);
  CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

  const int draws = 100000;
  Matrix sum = Matrix::Zero(4, 4);
  Eigen::MatrixXd sq_re = Eigen::MatrixXd::Zero(4, 4);
  Eigen::MatrixXd sq_im = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < draws; ++i) {
    Statevector psi = sample_haar_state(2, derive_seed(2, 1, i));
    Matrix op = psi.amplitudes() * psi.amplitudes().adjoint();
    sum += op;
    sq_re.array() += op.real().array().square();
    sq_im.array() += op.imag().array().square();
  }
  Matrix mean = sum / draws;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      double target = r == c ? 0.25 : 0.0;
      double var_re = sq_re(r, c) / draws - mean(r, c).real() * mean(r, c).real();
      double var_im = sq_im(r, c) / draws - mean(r, c).imag() * mean(r, c).imag();
      CHECK(std::abs(mean(r, c).real() - target) <=
            3.0 * std::sqrt(std::max(var_re, 1e-12) / draws));
      CHECK(std::abs(mean(r, c).imag()) <=
            3.0 * std::sqrt(std::max(var_im, 1e-12) / draws));
    }
}

TEST_CASE("haar unitary sampler: unitarity and one-design moment") {
  for (int i = 0; i < 20; ++i) {
    UnitaryMatrix u = sample_haar_unitary(2, derive_seed(3, 2, i));
    Matrix dev = u.entries().adjoint() * u.entries() -
                 Matrix::Identity(u.dim(), u.dim());
    CHECK(dev.cwiseAbs().maxCoeff() <= 1e-9);
  }

  const int draws = 20000;
  Matrix sum = Matrix::Zero(4, 4);
  for (int i = 0; i < draws; ++i) {
    UnitaryMatrix u = sample_haar_unitary(2, derive_seed(4, 3, i));
    sum += u.entries().col(0) * u.entries().col(0).adjoint();
  }
  Matrix mean = sum / draws;
  // entries of U|0><0|U^dag have variance O(1/d^2); 3 sigma with sigma
  // bounded by 1/(d sqrt(draws)) componentwise
  double band = 3.0 / (4.0 * std::sqrt((double)draws)) * 4.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      double target = r == c ? 0.25 : 0.0;
      CHECK(std::abs(mean(r, c).real() - target) <= band);
      CHECK(std::abs(mean(r, c).imag()) <= band);
    }
}

TEST_CASE("haar unitary first column is distributed as a haar state") {
  // two-sample chi-square on |amplitude|^2 of the first entry
  const int samples = 10000;
  const int bins = 20;
  std::vector<int> count_u(bins, 0), count_s(bins, 0);
  for (int i = 0; i < samples; ++i) {
    UnitaryMatrix u = sample_haar_unitary(1, derive_seed(5, 4, i));
    Statevector psi = sample_haar_state(1, derive_seed(5, 5, i));
    double pu = std::norm(u.entries()(0, 0));
    double ps = std::norm(psi.amplitude(0));
    int bu = std::min(bins - 1, (int)(pu * bins));
    int bs = std::min(bins - 1, (int)(ps * bins));
    ++count_u[bu];
    ++count_s[bs];
  }
  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) {
    double nu = count_u[b], ns = count_s[b];
    if (nu + ns == 0) continue;
    chi2 += (nu - ns) * (nu - ns) / (nu + ns);
  }
  // 19 dof at alpha = 0.01 -> 36.19
  CHECK(chi2 <= 36.19);
}

TEST_CASE("random function tables") {
  BooleanFunctionTable f = sample_random_function(10, 99);
  BooleanFunctionTable g = sample_random_function(10, 99);
  CHECK(f.table == g.table);
  CHECK((std::int64_t)f.table.size() == (std::int64_t{1} << 10));

  // density over many draws: binomial 3 sigma
  const int draws = 200;
  std::int64_t ones = 0, total = 0;
  for (int i = 0; i < draws; ++i) {
    BooleanFunctionTable h = sample_random_function(8, derive_seed(6, 6, i));
    for (auto b : h.table) ones += b;
    total += h.domain_size();
  }
  double phat = (double)ones / (double)total;
  CHECK(std::abs(phat - 0.5) <= 3.0 * std::sqrt(0.25 / (double)total));
}

TEST_CASE("random permutations are uniform bijections") {
  PermutationTable p = sample_random_permutation(4, 1234);
  CHECK(p.is_bijection());
  for (std::size_t i = 0; i < p.forward.size(); ++i)
    CHECK(p.inverse[p.forward[i]] == i);

  // chi-square over all 24 permutations of a 4-element domain
  const int draws = 100000;
  std::map<std::vector<std::uint32_t>, int> counts;
  for (int i = 0; i < draws; ++i) {
    PermutationTable q = sample_random_permutation(2, derive_seed(7, 7, i));
    ++counts[q.forward];
  }
  CHECK(counts.size() == 24);
  double expected = draws / 24.0;
  double chi2 = 0.0;
  for (const auto& [perm, c] : counts)
    chi2 += (c - expected) * (c - expected) / expected;
  // 23 dof at alpha = 0.01 -> 41.64
  CHECK(chi2 <= 41.64);
}

TEST_CASE("random density matrices satisfy the type invariants") {
  for (int i = 0; i < 10; ++i) {
    DensityMatrix rho = sample_random_density(3, derive_seed(8, 8, i));
    rho.validate_psd();
    CHECK(std::abs(rho.entries().trace().real() - 1.0) <= 1e-10);
  }
}

TEST_CASE("clifford tableau sampling: symplectic invariant and determinism") {
  for (int n = 1; n <= 4; ++n)
    for (int i = 0; i < 25; ++i) {
      CliffordTableau t = sample_random_clifford(n, derive_seed(9, 9, i + 100 * n));
      CHECK(t.is_valid());
    }
  CliffordSample a = sample_random_clifford_circuit(3, 4242);
  CliffordSample b = sample_random_clifford_circuit(3, 4242);
  CHECK(a.tableau == b.tableau);
  CHECK(tableau_from_gates(3, a.gates) == a.tableau);
}

TEST_CASE("clifford action on |0> is uniform over the six states (n=1)") {
  const int draws = 100000;
  std::map<std::string, int> counts;
  for (int i = 0; i < draws; ++i) {
    CliffordTableau t = sample_random_clifford(1, derive_seed(10, 10, i));
    UnitaryMatrix u = tableau_to_unitary(t);
    Vector col = u.entries().col(0);
    // canonical phase: first significant amplitude positive real
    Complex pivot = std::abs(col(0)) > 1e-8 ? col(0) : col(1);
    col *= std::conj(pivot) / std::abs(pivot);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f,%.4f,%.4f,%.4f",
                  std::round(col(0).real() * 1e4) / 1e4 + 0.0,
                  std::round(col(0).imag() * 1e4) / 1e4 + 0.0,
                  std::round(col(1).real() * 1e4) / 1e4 + 0.0,
                  std::round(col(1).imag() * 1e4) / 1e4 + 0.0);
    ++counts[buf];
  }
  CHECK(counts.size() == 6);
  double expected = draws / 6.0;
  double chi2 = 0.0;
  for (const auto& [k, c] : counts)
    chi2 += (c - expected) * (c - expected) / expected;
  // 5 dof at alpha = 0.01 -> 15.09
  CHECK(chi2 <= 15.09);
}

TEST_CASE("tableau_to_unitary on named tableaus") {
  CliffordTableau id = CliffordTableau::identity(2);
  UnitaryMatrix u = tableau_to_unitary(id);
  CHECK((u.entries() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);

  // Hadamard: X <-> Z
  CliffordTableau h = CliffordTableau::identity(1);
  h.apply_h(0);
  Matrix uh = tableau_to_unitary(h).entries();
  Matrix href(2, 2);
  double inv = 1.0 / std::sqrt(2.0);
  href << inv, inv, inv, -inv;
  Complex phase = uh(0, 0) / href(0, 0);
  CHECK(std::abs(std::abs(phase) - 1.0) <= 1e-10);
  CHECK((uh - phase * href).cwiseAbs().maxCoeff() <= 1e-10);
}

namespace {

Matrix pauli_matrix(const PauliRow& p, int n) {
  const std::int64_t d = dim_of(n);
  Matrix m(d, d);
  for (std::int64_t c = 0; c < d; ++c) {
    Vector e = Vector::Zero(d);
    e(c) = 1.0;
    m.col(c) = apply_pauli(p, e);
  }
  return m;
}

}  // namespace

TEST_CASE("tableau_to_unitary realizes the tableau's conjugation action") {
  for (int i = 0; i < 100; ++i) {
    int n = 1 + (i % 3);
    CliffordTableau t = sample_random_clifford(n, derive_seed(11, 11, i));
    Matrix u = tableau_to_unitary(t).entries();
    for (int j = 0; j < n; ++j) {
      for (int which = 0; which < 2; ++which) {
        PauliRow gen;
        if (which == 0)
          gen.x = 1u << j;
        else
          gen.z = 1u << j;
        const PauliRow& image = which == 0 ? t.x_images[j] : t.z_images[j];
        // U P U^dag = image  <=>  U P = image U
        Matrix lhs = u * pauli_matrix(gen, n);
        Matrix rhs = pauli_matrix(image, n) * u;
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9);
      }
    }
  }
}

TEST_CASE("stabilizer state enumeration counts and distinctness") {
  auto s1 = enumerate_stabilizer_states(1);
  CHECK(s1.size() == 6);
  auto s2 = enumerate_stabilizer_states(2);
  CHECK(s2.size() == 60);
  auto s3 = enumerate_stabilizer_states(3);
  // 2^n prod (2^k + 1)
  CHECK(s3.size() == 1080);

  for (std::size_t i = 0; i < s2.size(); ++i)
    for (std::size_t j = i + 1; j < s2.size(); ++j)
      CHECK(trace_distance_pure(s2[i], s2[j]) > 1e-9);
}

TEST_CASE("tableau enumeration oracle reproduces the stabilizer counts") {
  for (int n = 1; n <= 2; ++n) {
    auto tableaus = enumerate_clifford_tableaus(n);
    CHECK(tableaus.size() == (n == 1 ? 24 : 11520));
    // distinct states reached from |0...0>
    std::vector<Vector> reached;
    for (const auto& t : tableaus) {
      Vector col = tableau_to_unitary(t).entries().col(0);
      bool fresh = true;
      for (const auto& v : reached) {
        Complex ov = (v.adjoint() * col)(0, 0);
        if (std::abs(std::abs(ov) - 1.0) <= 1e-8) {
          fresh = false;
          break;
        }
      }
      if (fresh) reached.push_back(col);
    }
    CHECK(reached.size() == enumerate_stabilizer_states(n).size());
  }
}

TEST_CASE("stabilizer states form a 3-design on the first two moments") {
  for (int n = 1; n <= 2; ++n) {
    auto stabs = enumerate_stabilizer_states(n);
    double d = std::pow(2.0, n);
    for (int t = 0; t < 5; ++t) {
      Statevector psi = sample_haar_state(n, derive_seed(12, 12, t));
      double m2 = 0.0, m4 = 0.0;
      for (const auto& phi : stabs) {
        double f = std::norm((psi.amplitudes().adjoint() * phi.amplitudes())(0, 0));
        m2 += f;
        m4 += f * f;
      }
      m2 /= stabs.size();
      m4 /= stabs.size();
      CHECK(std::abs(m2 - 1.0 / d) <= 1e-10);
      CHECK(std::abs(m4 - 2.0 / (d * (d + 1.0))) <= 1e-10);
    }
  }
}

TEST_CASE("clifford circuit lowering prepares the tableau state") {
  for (int i = 0; i < 30; ++i) {
    int n = 1 + (i % 3);
    CliffordSample sample = sample_random_clifford_circuit(n, derive_seed(13, 13, i));
    CircuitDescription c = clifford_gates_to_circuit(sample.gates);
    CHECK(c.unitary_only());
    Bitstring desc = encode(c);
    CircuitDescription back = decode(desc, c.size());
    CHECK(back.gates == c.gates);

    Statevector prepared = [&] {
      Vector v = Vector::Zero(dim_of(n));
      v(0) = 1.0;
      Statevector zero(n, std::move(v));
      return apply_described(desc, c.size(), zero);
    }();
    Vector expected = tableau_to_unitary(sample.tableau).entries().col(0);
    Complex ov = (expected.adjoint() * prepared.amplitudes())(0, 0);
    CHECK(std::abs(std::abs(ov) - 1.0) <= 1e-9);
  }
}
