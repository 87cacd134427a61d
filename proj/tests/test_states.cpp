#include <doctest.h>

#include <cmath>

#include "qprlab/ensembles.hpp"
#include "qprlab/rng.hpp"
#include "qprlab/states.hpp"

using namespace qprlab;

namespace {

Statevector plus_state(int n) {
  Vector v = Vector::Constant(dim_of(n), 1.0 / std::sqrt((double)dim_of(n)));
  return Statevector(n, std::move(v));
}

Statevector minus_zero(int n) {
  Vector v = Vector::Zero(dim_of(n));
  v(0) = -1.0;
  return Statevector(n, std::move(v));
}

}  // namespace

TEST_CASE("fidelity identities") {
  Statevector zero = Statevector::zero_state(1);
  CHECK(fidelity(zero, DensityMatrix::from_pure(zero)) == doctest::Approx(1.0));
  CHECK(fidelity(zero, DensityMatrix::maximally_mixed(1)) ==
        doctest::Approx(0.5));
  CHECK(fidelity(zero, DensityMatrix::from_pure(plus_state(1))) ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(fidelity(zero, DensityMatrix::maximally_mixed(2)),
                  DimensionError);
}

TEST_CASE("trace distance basics") {
  Statevector zero = Statevector::zero_state(1);
  Statevector one = Statevector::computational_basis(1, 1);
  DensityMatrix rho = sample_random_density(2, 11);
  CHECK(trace_distance(rho, rho) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trace_distance(DensityMatrix::from_pure(zero),
                       DensityMatrix::from_pure(one)) == doctest::Approx(1.0));
  CHECK(trace_distance(DensityMatrix::from_pure(zero),
                       DensityMatrix::from_pure(plus_state(1))) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(
      trace_distance(DensityMatrix::maximally_mixed(1), rho),
      DimensionError);
}

TEST_CASE("pure trace distance matches the eigendecomposition route") {
  Statevector zero = Statevector::zero_state(1);
  Statevector one = Statevector::computational_basis(1, 1);
  CHECK(trace_distance_pure(zero, zero) == doctest::Approx(0.0));
  CHECK(trace_distance_pure(zero, one) == doctest::Approx(1.0));
  for (int i = 0; i < 200; ++i) {
    int n = 1 + (i % 3);
    Statevector a = sample_haar_state(n, derive_seed(17, 0, i));
    Statevector b = sample_haar_state(n, derive_seed(17, 1, i));
    double direct = trace_distance_pure(a, b);
    double eig = trace_distance(DensityMatrix::from_pure(a),
                                DensityMatrix::from_pure(b));
    CHECK(std::abs(direct - eig) <= 1e-10);
  }
}

TEST_CASE("l2 distance sees global phase, trace distance does not") {
  Statevector zero = Statevector::zero_state(1);
  Statevector one = Statevector::computational_basis(1, 1);
  CHECK(l2_distance(zero, zero) == doctest::Approx(0.0));
  CHECK(l2_distance(zero, minus_zero(1)) == doctest::Approx(2.0));
  CHECK(trace_distance_pure(zero, minus_zero(1)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(l2_distance(zero, one) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("multi_copy tensor powers") {
  Statevector zero = Statevector::zero_state(1);
  Statevector z3 = multi_copy(zero, 3);
  CHECK(z3.num_qubits() == 3);
  CHECK(z3.amplitude(0) == Complex(1.0, 0.0));
  Statevector p2 = multi_copy(plus_state(1), 2);
  for (int i = 0; i < 4; ++i)
    CHECK(p2.amplitude(i) == doctest::Approx(0.5));
  for (int i = 0; i < 20; ++i) {
    Statevector psi = sample_haar_state(2, derive_seed(3, 2, i));
    CHECK(multi_copy(psi, 3).amplitudes().norm() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(multi_copy(sample_haar_state(12, 1), 2), BudgetError);
}

TEST_CASE("partial trace of product and entangled states") {
  // |0> x |+>
  Statevector zero = Statevector::zero_state(1);
  Statevector plus = plus_state(1);
  Vector prod = kronecker(plus.amplitudes(), zero.amplitudes());
  // qubit 0 is the first factor of the kron on the right
  Statevector both(2, std::move(prod));
  DensityMatrix keep0 = partial_trace(DensityMatrix::from_pure(both), {1});
  CHECK((keep0.entries() - DensityMatrix::from_pure(zero).entries())
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  DensityMatrix keep1 = partial_trace(DensityMatrix::from_pure(both), {0});
  CHECK((keep1.entries() - DensityMatrix::from_pure(plus).entries())
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  // Bell state marginal
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  DensityMatrix marg =
      partial_trace(DensityMatrix::from_pure(Statevector(2, bell)), {1});
  CHECK((marg.entries() - DensityMatrix::maximally_mixed(1).entries())
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  for (int i = 0; i < 20; ++i) {
    DensityMatrix rho = sample_random_density(3, derive_seed(5, 3, i));
    DensityMatrix red = partial_trace(rho, {0, 2});
    CHECK(std::abs(red.entries().trace().real() - 1.0) <= 1e-10);
  }
  CHECK_THROWS_AS(partial_trace(DensityMatrix::maximally_mixed(2), {5}),
                  DimensionError);
}

TEST_CASE("haar moment state: exact symmetric projector") {
  DensityMatrix m11 = haar_moment_state(1, 1);
  CHECK((m11.entries() - DensityMatrix::maximally_mixed(1).entries())
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  for (int n = 1; n <= 2; ++n)
    for (int m = 1; m <= 3; ++m) {
      if (dim_of(n * m) > 64) continue;
      DensityMatrix mm = haar_moment_state(n, m);
      CHECK(std::abs(mm.entries().trace().real() - 1.0) <= 1e-12);
    }
  CHECK_THROWS_AS(haar_moment_state(4, 4), BudgetError);
}

TEST_CASE("haar moment state (1,2) matches the Monte Carlo average") {
  DensityMatrix exact = haar_moment_state(1, 2);
  const int draws = 100000;
  Matrix sum = Matrix::Zero(4, 4);
  Eigen::MatrixXd sum_sq_re = Eigen::MatrixXd::Zero(4, 4);
  Eigen::MatrixXd sum_sq_im = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < draws; ++i) {
    Statevector psi = sample_haar_state(1, derive_seed(23, 4, i));
    Vector two = kronecker(psi.amplitudes(), psi.amplitudes());
    Matrix op = two * two.adjoint();
    sum += op;
    sum_sq_re.array() += op.real().array().square();
    sum_sq_im.array() += op.imag().array().square();
  }
  Matrix mean = sum / draws;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      double var_re =
          sum_sq_re(r, c) / draws - mean(r, c).real() * mean(r, c).real();
      double var_im =
          sum_sq_im(r, c) / draws - mean(r, c).imag() * mean(r, c).imag();
      double tol_re = 3.0 * std::sqrt(std::max(var_re, 1e-12) / draws);
      double tol_im = 3.0 * std::sqrt(std::max(var_im, 1e-12) / draws);
      CHECK(std::abs(mean(r, c).real() - exact.entries()(r, c).real()) <=
            tol_re);
      CHECK(std::abs(mean(r, c).imag() - exact.entries()(r, c).imag()) <=
            tol_im);
    }
}

TEST_CASE("diamond distance for unitary channels") {
  UnitaryMatrix id1 = UnitaryMatrix::identity(1);
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  UnitaryMatrix ux(1, x);
  CHECK(diamond_distance_unitary(id1, id1) == doctest::Approx(0.0));
  CHECK(diamond_distance_unitary(id1, ux) == doctest::Approx(2.0));

  // Probe lower bound: the maximally entangled state certifies a lower
  // bound on the diamond distance.
  for (int i = 0; i < 100; ++i) {
    int n = 1 + (i % 2);
    UnitaryMatrix u = sample_haar_unitary(n, derive_seed(31, 5, i));
    UnitaryMatrix v = sample_haar_unitary(n, derive_seed(31, 6, i));
    const std::int64_t d = u.dim();
    Vector probe = Vector::Zero(d * d);
    for (std::int64_t k = 0; k < d; ++k)
      probe(k * d + k) = 1.0 / std::sqrt((double)d);
    Matrix ui = kronecker(u.entries(), Matrix::Identity(d, d));
    Matrix vi = kronecker(v.entries(), Matrix::Identity(d, d));
    Vector a = ui * probe, b = vi * probe;
    double f = std::norm((a.adjoint() * b)(0, 0));
    double lower = 2.0 * std::sqrt(std::max(0.0, 1.0 - f));
    CHECK(diamond_distance_unitary(u, v) >= lower - 1e-9);
  }
}

TEST_CASE("Fuchs-van de Graaf sandwich") {
  for (int i = 0; i < 1000; ++i) {
    int n = 1 + (i % 3);
    Statevector psi = sample_haar_state(n, derive_seed(41, 7, i));
    DensityMatrix sigma = sample_random_density(n, derive_seed(41, 8, i));
    double f = fidelity(psi, sigma);
    double td = trace_distance(DensityMatrix::from_pure(psi), sigma);
    CHECK(1.0 - f <= td + 1e-10);
    CHECK(td <= std::sqrt(1.0 - f) + 1e-10);
  }
}

TEST_CASE("multi-copy trace distance identity and sqrt(m) bound") {
  for (int i = 0; i < 500; ++i) {
    int n = 1 + (i % 2);
    Statevector a = sample_haar_state(n, derive_seed(43, 9, i));
    Statevector b = sample_haar_state(n, derive_seed(43, 10, i));
    Complex ov = a.amplitudes().adjoint() * b.amplitudes();
    double f = std::norm(ov);
    double td1 = trace_distance_pure(a, b);
    for (int m = 1; m <= 3; ++m) {
      double tdm = trace_distance_pure(multi_copy(a, m), multi_copy(b, m));
      CHECK(std::abs(tdm - std::sqrt(1.0 - std::pow(f, m))) <= 1e-10);
      CHECK(tdm <= std::sqrt((double)m) * td1 + 1e-10);
    }
  }
}

TEST_CASE("l2 dominates pure trace distance") {
  for (int i = 0; i < 1000; ++i) {
    int n = 1 + (i % 3);
    Statevector a = sample_haar_state(n, derive_seed(47, 11, i));
    Statevector b = sample_haar_state(n, derive_seed(47, 12, i));
    CHECK(trace_distance_pure(a, b) <= l2_distance(a, b) + 1e-12);
  }
}

TEST_CASE("diamond distance is subadditive under tensor powers") {
  for (int i = 0; i < 100; ++i) {
    UnitaryMatrix u = sample_haar_unitary(1, derive_seed(53, 13, i));
    UnitaryMatrix v = sample_haar_unitary(1, derive_seed(53, 14, i));
    UnitaryMatrix u2(2, kronecker(u.entries(), u.entries()));
    UnitaryMatrix v2(2, kronecker(v.entries(), v.entries()));
    CHECK(diamond_distance_unitary(u2, v2) <=
          2.0 * diamond_distance_unitary(u, v) + 1e-9);
  }
}

TEST_CASE("trace distance is a metric on random triples") {
  for (int i = 0; i < 200; ++i) {
    int n = 1 + (i % 2);
    DensityMatrix a = sample_random_density(n, derive_seed(59, 15, i));
    DensityMatrix b = sample_random_density(n, derive_seed(59, 16, i));
    DensityMatrix c = sample_random_density(n, derive_seed(59, 17, i));
    double ab = trace_distance(a, b);
    double ba = trace_distance(b, a);
    double ac = trace_distance(a, c);
    double cb = trace_distance(c, b);
    CHECK(std::abs(ab - ba) <= 1e-10);
    CHECK(ab >= -1e-12);
    CHECK(ab <= ac + cb + 1e-10);
  }
}

TEST_CASE("statevector and density matrix invariants are enforced") {
  Vector bad = Vector::Zero(2);
  bad(0) = 2.0;
  CHECK_THROWS_AS(Statevector(1, bad), ValidationError);
  Vector wrong_len = Vector::Zero(3);
  CHECK_THROWS_AS(Statevector(1, wrong_len), DimensionError);
  Matrix nonherm(2, 2);
  nonherm << 0.5, 0.5, -0.5, 0.5;
  CHECK_THROWS_AS(DensityMatrix(1, nonherm), ValidationError);
  sample_random_density(2, 7).validate_psd();
}
