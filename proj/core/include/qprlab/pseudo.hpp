#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qprlab/clifford.hpp"
#include "qprlab/ensembles.hpp"
#include "qprlab/states.hpp"

namespace qprlab {

// (kappa, ell, m, s, eps) PRS parameter bundle; s and eps are informational
// (time budgets are recorded, never enforced).
struct PRSParams {
  int kappa = 1;
  int ell = 1;
  int m = 1;
  double s = 0.0;
  double eps = 0.0;

  void validate() const {
    if (kappa < 1 || ell < 1 || m < 1)
      throw ValidationError("PRSParams: kappa, ell, m must be >= 1");
  }
};

// Deterministic keyed bit expander in counter mode. Explicitly
// non-cryptographic: it exists to feed statistical experiments with
// reproducible uniform-looking bits. Bit index space is partitioned into
// fixed regions so independent consumers of one key never overlap.
class KeyedExpander {
 public:
  explicit KeyedExpander(std::vector<std::uint8_t> key);

  // Bits [start, start + count) of the expansion, one byte per bit.
  std::vector<std::uint8_t> expand(std::uint64_t start,
                                   std::uint64_t count) const;
  std::uint8_t bit(std::uint64_t index) const;
  std::uint64_t word(std::uint64_t block_index) const;

  const std::vector<std::uint8_t>& key() const { return key_; }

 private:
  std::vector<std::uint8_t> key_;
  std::uint64_t k0_ = 0, k1_ = 0;
};

std::vector<std::uint8_t> parse_hex_key(const std::string& hex);

// Fixed key-stream regions (bit offsets): the PRF truth table reads from
// kPrfRegion, Feistel round tables from kFeistelRegion (stride
// kFeistelRoundStride per round), and the Clifford layer seeds from
// kCliffordSeedRegion. This is the documented key segmentation used by
// pru_unitary.
inline constexpr std::uint64_t kPrfRegion = 0;
inline constexpr std::uint64_t kFeistelRegion = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kFeistelRoundStride = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kCliffordSeedRegion = std::uint64_t{1} << 50;

// Truth table F_k: bit x of the key expansion; prefix-consistent across ell.
BooleanFunctionTable prf_table(const KeyedExpander& key, int ell);

// |f> = 2^{-ell/2} sum_x (-1)^{f(x)} |x>.
Statevector phase_state(const BooleanFunctionTable& f);

// phase_state(prf_table(key, ell)).
Statevector prs_state(const KeyedExpander& key, int ell);

// E_f[|f><f|^{otimes m}] over all Boolean functions, computed exactly: the
// ((x_1..x_m),(y_1..y_m)) entry is 2^{-ell*m} when the combined multiset has
// every value an even number of times, else 0.
DensityMatrix exact_phase_moment(int ell, int m,
                                 std::int64_t max_dim = kMaxMomentDim);

// Exact trace distance between exact_phase_moment and haar_moment_state,
// evaluated inside the symmetric subspace (both states live there), which
// keeps the eigenproblem at dimension C(2^ell + m - 1, m).
double phase_vs_haar_distance(int ell, int m,
                              std::int64_t max_dim = kMaxMomentDim);

// 4 m^2 / 2^ell.
double phase_vs_haar_bound(int ell, int m);

// Balanced Feistel network; round functions are read from disjoint key
// regions. Default round count ell^2.
PermutationTable feistel_permutation(const KeyedExpander& key, int ell,
                                     int rounds = -1);

// U_p |x> = |p(x)>, built directly as a permutation matrix.
UnitaryMatrix inplace_permutation_unitary(const PermutationTable& p);

struct PruComponents {
  PermutationTable permutation;
  BooleanFunctionTable phase_function;
  CliffordTableau clifford;
};

PruComponents pru_components(const KeyedExpander& key, int ell);

// U_p * F * C with p, F, C derived from disjoint segments of one key stream.
UnitaryMatrix pru_unitary(const KeyedExpander& key, int ell);

}  // namespace qprlab
