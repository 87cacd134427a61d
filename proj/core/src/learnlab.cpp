#include "qprlab/learnlab.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qprlab/clifford.hpp"
#include "qprlab/ensembles.hpp"

namespace qprlab {

double swap_test_prob(const DensityMatrix& rho, const Statevector& psi) {
  return 0.5 * (1.0 + fidelity(psi, rho));
}

std::size_t swap_test_sample(const DensityMatrix& rho, const Statevector& psi,
                             std::size_t shots, std::uint64_t seed) {
  const double p = swap_test_prob(rho, psi);
  Rng rng(seed);
  std::size_t count = 0;
  for (std::size_t i = 0; i < shots; ++i)
    if (rng.next_double() < p) ++count;
  return count;
}

std::int64_t sample_basis_measurement(const Statevector& psi, Rng& rng) {
  double u = rng.next_double();
  double acc = 0.0;
  const std::int64_t d = psi.dim();
  for (std::int64_t i = 0; i < d; ++i) {
    acc += std::norm(psi.amplitude(i));
    if (u < acc) return i;
  }
  return d - 1;
}

double hoeffding_halfwidth(std::size_t trials, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(trials)));
}

Distinguisher distinguisher_from_learner(Learner learner, std::size_t m,
                                         int num_qubits) {
  return [learner = std::move(learner), m, num_qubits](
             const Statevector& psi, Rng& rng) -> Verdict {
    LearnerOutput out;
    Statevector hypothesis = Statevector::zero_state(num_qubits);
    try {
      out = learner(psi, m, rng);
      hypothesis =
          apply_described(out.desc, out.circuit_size,
                          Statevector::zero_state(num_qubits));
    } catch (const std::exception&) {
      return Verdict::learner_failed;
    }
    // SWAP test against the extra copy (copy m+1), one shot.
    Complex ov = hypothesis.amplitudes().adjoint() * psi.amplitudes();
    double p = 0.5 * (1.0 + std::norm(ov));
    return rng.next_double() < p ? Verdict::accept : Verdict::reject;
  };
}

DistinguishingReport estimate_advantage(const Distinguisher& distinguisher,
                                        const ConceptSampler& concept_sampler,
                                        int ell, std::size_t copies,
                                        std::size_t trials, double alpha,
                                        std::uint64_t seed) {
  (void)copies;  // recorded by callers; trials deliver fresh analytic copies
  DistinguishingReport report;
  report.trials_per_arm = trials;
  report.alpha = alpha;
  report.seed = seed;
  for (std::size_t t = 0; t < trials; ++t) {
    Statevector psi_c = concept_sampler(derive_seed(seed, 0, t));
    Rng rng_c(seed, 1, t);
    switch (distinguisher(psi_c, rng_c)) {
      case Verdict::accept:
        ++report.accepts_concept;
        break;
      case Verdict::learner_failed:
        ++report.failures_concept;
        break;
      case Verdict::reject:
        break;
    }
    Statevector psi_h = sample_haar_state(ell, derive_seed(seed, 2, t));
    Rng rng_h(seed, 3, t);
    switch (distinguisher(psi_h, rng_h)) {
      case Verdict::accept:
        ++report.accepts_haar;
        break;
      case Verdict::learner_failed:
        ++report.failures_haar;
        break;
      case Verdict::reject:
        break;
    }
  }
  double pc = static_cast<double>(report.accepts_concept) / trials;
  double ph = static_cast<double>(report.accepts_haar) / trials;
  report.advantage = std::abs(pc - ph);
  report.ci_halfwidth = 2.0 * hoeffding_halfwidth(trials, alpha);
  return report;
}

Learner exact_zero_learner() {
  return [](const Statevector&, std::size_t m, Rng&) {
    LearnerOutput out;
    out.circuit_size = 0;
    out.samples_used = m;
    return out;  // empty circuit prepares |0...0>
  };
}

Learner basis_majority_learner(int num_qubits) {
  return [num_qubits](const Statevector& psi, std::size_t m, Rng& rng) {
    std::map<std::int64_t, std::size_t> counts;
    for (std::size_t i = 0; i < m; ++i)
      ++counts[sample_basis_measurement(psi, rng)];
    std::int64_t winner = 0;
    std::size_t best = 0;
    for (const auto& [outcome, c] : counts) {
      if (c > best) {  // ties resolve to the smallest outcome
        best = c;
        winner = outcome;
      }
    }
    std::vector<GateOp> gates;
    for (int q = 0; q < num_qubits; ++q) {
      if (!(winner & (std::int64_t{1} << q))) continue;
      GateOp h{GateKind::H, static_cast<std::uint32_t>(q), 0, 0};
      gates.push_back(h);
      for (int i = 0; i < 4; ++i)
        gates.push_back({GateKind::T, static_cast<std::uint32_t>(q), 0, 0});
      gates.push_back(h);
    }
    CircuitDescription c = CircuitDescription::from_gates(std::move(gates));
    LearnerOutput out;
    out.desc = encode(c);
    out.circuit_size = c.size();
    out.samples_used = m;
    return out;
  };
}

LearnerOutput trivial_stabilizer_learner(int num_qubits, std::uint64_t seed) {
  CliffordSample sample = sample_random_clifford_circuit(num_qubits, seed);
  CircuitDescription c = clifford_gates_to_circuit(sample.gates);
  LearnerOutput out;
  out.desc = encode(c);
  out.circuit_size = c.size();
  out.samples_used = 0;
  return out;
}

Learner trivial_stabilizer_learner_fn(int num_qubits) {
  return [num_qubits](const Statevector&, std::size_t, Rng& rng) {
    return trivial_stabilizer_learner(num_qubits, rng.next_u64());
  };
}

MeanFidelityReport mean_fidelity_on_haar(const Learner& learner, int num_qubits,
                                         std::size_t m, std::size_t trials,
                                         double alpha, std::uint64_t seed) {
  MeanFidelityReport report;
  report.trials = trials;
  report.samples.reserve(trials);
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Statevector target = sample_haar_state(num_qubits, derive_seed(seed, 10, t));
    Rng rng(seed, 11, t);
    double f = 0.0;
    try {
      LearnerOutput out = learner(target, m, rng);
      Statevector hyp = apply_described(out.desc, out.circuit_size,
                                        Statevector::zero_state(num_qubits));
      Complex ov = hyp.amplitudes().adjoint() * target.amplitudes();
      f = std::norm(ov);
    } catch (const std::exception&) {
      ++report.failures;
    }
    report.samples.push_back(f);
    sum += f;
  }
  report.mean = sum / static_cast<double>(trials);
  report.ci_halfwidth = hoeffding_halfwidth(trials, alpha);
  return report;
}

double bru_bound(int num_qubits, std::size_t m) {
  double d = std::pow(2.0, num_qubits);
  return (static_cast<double>(m) + 1.0) / (static_cast<double>(m) + d);
}

PaleyZygmundResult paley_zygmund_check(const std::vector<double>& samples,
                                       double theta) {
  if (samples.empty())
    throw ValidationError("paley_zygmund_check: no samples");
  if (theta < 0.0 || theta > 1.0)
    throw ValidationError("paley_zygmund_check: theta must lie in [0, 1]");
  double mean = 0.0, second = 0.0;
  for (double x : samples) {
    if (x < 0.0) throw ValidationError("paley_zygmund_check: negative sample");
    mean += x;
    second += x * x;
  }
  const double n = static_cast<double>(samples.size());
  mean /= n;
  second /= n;
  std::size_t above = 0;
  for (double x : samples)
    if (x > theta * mean) ++above;
  PaleyZygmundResult r;
  r.lhs = static_cast<double>(above) / n;
  r.rhs = second > 0.0 ? (1.0 - theta) * (1.0 - theta) * mean * mean / second
                       : 0.0;
  r.sigma = std::sqrt(std::max(r.lhs * (1.0 - r.lhs), 1.0 / n) / n);
  r.pass = r.lhs >= r.rhs - 3.0 * r.sigma;
  return r;
}

}  // namespace qprlab
