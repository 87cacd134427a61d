#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qprlab/circuits.hpp"
#include "qprlab/states.hpp"

namespace qprlab {

// Monic characteristic polynomial coefficients of A, highest degree first
// ([1, c_1, ..., c_d]); trace-based recurrence, dimension capped at 64.
std::vector<Complex> faddeev_leverrier(const Matrix& a);

// Real parts with a check that imaginary parts are negligible.
std::vector<double> to_real_coefficients(const std::vector<Complex>& coeffs,
                                         double tol = 1e-8);

// All real roots with multiplicity, ascending. Requires an all-real-rooted
// input (Hermitian provenance); Sturm bisection isolates the distinct roots
// of the square-free part, Newton polishes them, deflation recovers
// multiplicities. Throws if the multiplicity count does not exhaust the
// degree (non-real-rooted input detected).
std::vector<double> real_roots(std::vector<double> coeffs);

// Half the sum of |roots| of the characteristic polynomial of rho - sigma.
double trace_distance_charpoly(const DensityMatrix& rho,
                               const DensityMatrix& sigma);

struct PackingResult {
  std::size_t count = 0;
  std::vector<std::size_t> indices;
};

// Greedy maximal epsilon-separated subset under trace_distance_pure, input
// order. epsilon = 0 degenerates to deduplication at 1e-9.
PackingResult greedy_packing(const std::vector<Statevector>& states,
                             double epsilon);

// Exact maximum epsilon-separated subset (branch and bound); |states| <= 18.
PackingResult exact_packing(const std::vector<Statevector>& states,
                            double epsilon);

struct PackingFormulaParams {
  int n = 1;        // qubits
  double r = 1.0;   // depth
  double eps = 0.0; // radius, in [0, 0.5)
  double c = 1.0;   // gate-set constant c(G), caller supplied

  void validate() const {
    if (eps < 0.0 || eps > 0.5)
      throw ValidationError("packing radius must lie in [0, 0.5]");
    if (c <= 0.0) throw ValidationError("gate-set constant must be positive");
    if (n < 1 || r < 0.0) throw ValidationError("bad packing parameters");
  }
};

// alpha(r) = floor((r / (n^2 c))^{1/11}).
double packing_alpha(const PackingFormulaParams& p);

// (2^n (1 - 4 eps^2) / alpha)^alpha; 1 when alpha = 0 (vacuous bound).
double packing_lower_formula(const PackingFormulaParams& p);

// log2 of the circuit-counting bound: s * (3 ceil(log2 s) + 4).
double counting_upper_bound_log2(std::size_t s);
// 2^{s(3 ceil(log2 s)+4)}; +inf if it overflows double.
double counting_upper_bound(std::size_t s);

// s' = s^12 * n^2 * c with the O-constant dropped.
double hierarchy_size_map(std::size_t s, int n, double c);

struct DiagonalizationParams {
  int n = 1;                 // output qubits
  std::size_t s = 0;         // inner circuit size (ancilla allowed)
  std::size_t s_prime = 1;   // candidate circuit size (no ancilla)
  double gap = 0.4925;
  double tol = 0.025;        // recorded estimate accuracy
  std::uint64_t max_candidates = 1u << 20;
  std::uint64_t max_inner = 1u << 20;
};

struct DiagonalizationRecord {
  std::uint64_t candidate_index = 0;
  double min_distance = 0.0;  // prefix minimum at disqualification time
  bool disqualified_early = false;
};

struct DiagonalizationResult {
  bool found = false;
  std::optional<CircuitDescription> witness;
  double witness_min_distance = 0.0;
  std::uint64_t witness_index = 0;
  // Best (largest) min-distance candidate seen; meaningful when exhausted.
  std::uint64_t best_index = 0;
  double best_min_distance = -1.0;
  std::optional<CircuitDescription> best_candidate;
  std::uint64_t candidates_scanned = 0;
  std::uint64_t inner_circuits = 0;
  std::vector<DiagonalizationRecord> records;
};

// Scans size-s_prime no-ancilla unitary circuits V_j in canonical order; for
// each, measures the charpoly trace distance to every size-s circuit state
// and returns the first V_j whose minimum exceeds the gap. The inner scan
// early-exits (deterministically, in enumeration order) once a distance at
// or below the gap disqualifies the candidate.
DiagonalizationResult diagonalization_search(const DiagonalizationParams& p);

}  // namespace qprlab
