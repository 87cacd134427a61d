#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qprlab/bitstring.hpp"
#include "qprlab/circuits.hpp"
#include "qprlab/rng.hpp"
#include "qprlab/states.hpp"

namespace qprlab {

// Learning guarantee in the (eta, lambda) parameterization: the learner's
// hypothesis is within trace distance 1 - eta with probability at least
// lambda, i.e. (eps_learn, delta_fail) = (1 - eta, 1 - lambda).
struct LearnerSpec {
  std::size_t m = 0;
  double eta = 0.0;
  double lambda = 0.0;

  double eps_learn() const { return 1.0 - eta; }
  double delta_fail() const { return 1.0 - lambda; }

  void validate() const {
    if (eta < 0.0 || eta > 1.0 || lambda < 0.0 || lambda > 1.0)
      throw ValidationError("LearnerSpec: eta, lambda must lie in [0, 1]");
  }
};

// A learner's answer: the description of a unitary-only circuit preparing
// the hypothesis state, plus bookkeeping.
struct LearnerOutput {
  Bitstring desc;
  std::size_t circuit_size = 0;
  std::size_t samples_used = 0;
};

// A learner consumes m copies of an unknown pure state. Classically that
// means it may compute measurement statistics of psi through the supplied
// per-trial RNG; it must be a pure function of (psi, m, rng stream).
using Learner =
    std::function<LearnerOutput(const Statevector& psi, std::size_t m, Rng& rng)>;

enum class Verdict { accept, reject, learner_failed };

// A single-trial distinguisher: given the unknown state and this trial's
// randomness, outputs its decision bit.
using Distinguisher = std::function<Verdict(const Statevector& psi, Rng& rng)>;

using ConceptSampler = std::function<Statevector(std::uint64_t seed)>;

struct DistinguishingReport {
  std::size_t trials_per_arm = 0;
  std::size_t accepts_concept = 0;
  std::size_t accepts_haar = 0;
  std::size_t failures_concept = 0;  // learner_failed trials (counted as reject)
  std::size_t failures_haar = 0;
  double advantage = 0.0;
  double ci_halfwidth = 0.0;  // two-sided Hoeffding, both arms combined
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

// SWAP test acceptance probability: (1 + <psi|rho|psi>) / 2, exact.
double swap_test_prob(const DensityMatrix& rho, const Statevector& psi);

// Finite-shot SWAP test: binomial draws at swap_test_prob.
std::size_t swap_test_sample(const DensityMatrix& rho, const Statevector& psi,
                             std::size_t shots, std::uint64_t seed);

// Samples a computational-basis measurement outcome of psi.
std::int64_t sample_basis_measurement(const Statevector& psi, Rng& rng);

// Learning-to-distinguishing reduction: run the learner on m copies, prepare
// the hypothesis from its description, SWAP-test it against copy m+1 and
// output the test bit. A learner that fails to emit a decodable unitary-only
// description yields Verdict::learner_failed.
Distinguisher distinguisher_from_learner(Learner learner, std::size_t m,
                                         int num_qubits);

// Two-arm advantage estimate: concept draws vs Haar draws, fresh copies per
// trial, Hoeffding confidence intervals at level alpha.
DistinguishingReport estimate_advantage(const Distinguisher& distinguisher,
                                        const ConceptSampler& concept_sampler,
                                        int ell, std::size_t copies,
                                        std::size_t trials, double alpha,
                                        std::uint64_t seed);

// --- shipped learners ---------------------------------------------------------

// Exact learner for the one-state class {|0^n>}: always outputs the empty
// circuit.
Learner exact_zero_learner();

// Majority vote over computational-basis measurements of m copies; the
// hypothesis is the basis state of the winning outcome (X as H T^4 H).
Learner basis_majority_learner(int num_qubits);

// Sample-free learner that emits a uniformly random stabilizer circuit
// (Clifford gates lowered to {H, T, CNOT}; S = T^2, exact).
LearnerOutput trivial_stabilizer_learner(int num_qubits, std::uint64_t seed);
Learner trivial_stabilizer_learner_fn(int num_qubits);

struct MeanFidelityReport {
  double mean = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::vector<double> samples;
};

// Mean fidelity of the learner's hypothesis against Haar random targets.
MeanFidelityReport mean_fidelity_on_haar(const Learner& learner, int num_qubits,
                                         std::size_t m, std::size_t trials,
                                         double alpha, std::uint64_t seed);

// (m + 1) / (m + 2^n), the information-theoretic ceiling for the mean.
double bru_bound(int num_qubits, std::size_t m);

struct PaleyZygmundResult {
  double lhs = 0.0;    // empirical Pr[X > theta * mean]
  double rhs = 0.0;    // (1-theta)^2 mean^2 / second_moment
  double sigma = 0.0;  // binomial std dev of lhs
  bool pass = false;   // lhs >= rhs - 3 sigma
};

PaleyZygmundResult paley_zygmund_check(const std::vector<double>& samples,
                                       double theta);

// Hoeffding half width sqrt(ln(2/alpha) / (2 trials)).
double hoeffding_halfwidth(std::size_t trials, double alpha);

}  // namespace qprlab
