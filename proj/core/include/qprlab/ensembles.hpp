#pragma once

#include <cstdint>
#include <vector>

#include "qprlab/states.hpp"

namespace qprlab {

// Explicit truth table of f : {0,1}^ell -> {0,1}.
struct BooleanFunctionTable {
  int ell = 0;
  std::vector<std::uint8_t> table;  // 2^ell entries, values 0/1

  std::uint8_t operator()(std::uint64_t x) const { return table[x]; }
  std::int64_t domain_size() const { return std::int64_t{1} << ell; }
};

// Bijection on {0,1}^ell with its inverse materialized.
struct PermutationTable {
  int ell = 0;
  std::vector<std::uint32_t> forward;
  std::vector<std::uint32_t> inverse;

  std::int64_t domain_size() const { return std::int64_t{1} << ell; }
  bool is_bijection() const;
};

// Gaussian amplitude vector, normalized; realizes the Haar measure on pure
// states.
Statevector sample_haar_state(int num_qubits, std::uint64_t seed);

// Ginibre matrix -> QR -> R-diagonal phase correction.
UnitaryMatrix sample_haar_unitary(int num_qubits, std::uint64_t seed);

// Uniform truth table (ell <= 20).
BooleanFunctionTable sample_random_function(int ell, std::uint64_t seed);

// Fisher-Yates shuffle of the identity map.
PermutationTable sample_random_permutation(int ell, std::uint64_t seed);

// Normalized Ginibre GG^dagger; a full-rank random mixed state for tests and
// experiments.
DensityMatrix sample_random_density(int num_qubits, std::uint64_t seed);

}  // namespace qprlab
