#include "qprlab/pseudo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qprlab/rng.hpp"

namespace qprlab {

KeyedExpander::KeyedExpander(std::vector<std::uint8_t> key)
    : key_(std::move(key)) {
  if (key_.empty()) throw ValidationError("expander key must be non-empty");
  // Fold the key bytes into two 64-bit lanes.
  for (std::size_t i = 0; i < key_.size(); ++i) {
    if ((i >> 3) % 2 == 0)
      k0_ ^= static_cast<std::uint64_t>(key_[i]) << (8 * (i & 7));
    else
      k1_ ^= static_cast<std::uint64_t>(key_[i]) << (8 * (i & 7));
  }
  std::uint64_t s = k0_ ^ 0x6a09e667f3bcc908ULL;
  k0_ = splitmix64(s);
  s ^= k1_ ^ 0xbb67ae8584caa73bULL;
  k1_ = splitmix64(s);
}

std::uint64_t KeyedExpander::word(std::uint64_t block_index) const {
  std::uint64_t s = k0_ + block_index * 0x9e3779b97f4a7c15ULL;
  std::uint64_t v = splitmix64(s);
  s ^= k1_;
  v ^= splitmix64(s);
  return v;
}

std::uint8_t KeyedExpander::bit(std::uint64_t index) const {
  return (word(index >> 6) >> (63 - (index & 63))) & 1;
}

std::vector<std::uint8_t> KeyedExpander::expand(std::uint64_t start,
                                                std::uint64_t count) const {
  std::vector<std::uint8_t> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(bit(start + i));
  return out;
}

std::vector<std::uint8_t> parse_hex_key(const std::string& hex) {
  if (hex.empty() || hex.size() % 2 != 0)
    throw ValidationError("hex key must have a positive, even digit count");
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw ValidationError("hex key contains a non-hex digit");
  };
  std::vector<std::uint8_t> out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2)
    out.push_back(static_cast<std::uint8_t>((nibble(hex[i]) << 4) |
                                            nibble(hex[i + 1])));
  return out;
}

BooleanFunctionTable prf_table(const KeyedExpander& key, int ell) {
  if (ell < 0 || ell > 20) throw BudgetError("prf_table: ell outside budget");
  BooleanFunctionTable f;
  f.ell = ell;
  f.table = key.expand(kPrfRegion, std::uint64_t{1} << ell);
  return f;
}

Statevector phase_state(const BooleanFunctionTable& f) {
  if (f.ell > kMaxStateQubits)
    throw BudgetError("phase_state: ell outside the statevector budget");
  const std::int64_t d = f.domain_size();
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  Vector v(d);
  for (std::int64_t x = 0; x < d; ++x) v(x) = f.table[x] ? -a : a;
  return Statevector(f.ell, std::move(v));
}

Statevector prs_state(const KeyedExpander& key, int ell) {
  return phase_state(prf_table(key, ell));
}

namespace {

// Digits of a composite index, most significant copy first.
void index_digits(std::int64_t index, int copies, int ell,
                  std::int64_t* out) {
  const std::int64_t mask = (std::int64_t{1} << ell) - 1;
  for (int i = copies - 1; i >= 0; --i) {
    out[i] = index & mask;
    index >>= ell;
  }
}

// True when every value in the 2m merged digits appears an even number of
// times.
bool even_multiset(std::int64_t* merged, int count) {
  std::sort(merged, merged + count);
  for (int i = 0; i < count; i += 2)
    if (merged[i] != merged[i + 1]) return false;
  return true;
}

}  // namespace

DensityMatrix exact_phase_moment(int ell, int m, std::int64_t max_dim) {
  if (ell < 1 || m < 1) throw ValidationError("exact_phase_moment: bad params");
  std::int64_t total = 1;
  for (int i = 0; i < m; ++i) {
    total <<= ell;
    if (total > max_dim)
      throw BudgetError("exact_phase_moment exceeds the moment matrix budget");
  }
  const double val = std::pow(2.0, -static_cast<double>(ell) * m);
  Matrix rho = Matrix::Zero(total, total);
  std::vector<std::int64_t> merged(2 * m);
  for (std::int64_t r = 0; r < total; ++r) {
    for (std::int64_t c = 0; c <= r; ++c) {
      index_digits(r, m, ell, merged.data());
      index_digits(c, m, ell, merged.data() + m);
      if (even_multiset(merged.data(), 2 * m)) {
        rho(r, c) = val;
        rho(c, r) = val;
      }
    }
  }
  return DensityMatrix(ell * m, std::move(rho));
}

double phase_vs_haar_bound(int ell, int m) {
  return 4.0 * m * m / std::pow(2.0, ell);
}

double phase_vs_haar_distance(int ell, int m, std::int64_t max_dim) {
  if (ell < 1 || m < 1)
    throw ValidationError("phase_vs_haar_distance: bad params");
  std::int64_t total = 1;
  for (int i = 0; i < m; ++i) {
    total <<= ell;
    if (total > max_dim)
      throw BudgetError("phase_vs_haar_distance exceeds the moment budget");
  }
  const std::int64_t base = std::int64_t{1} << ell;

  // Both states are supported on the symmetric subspace, so the spectrum of
  // their difference is computed in the multiset basis. For multisets A, B
  // with distinct-permutation counts k_A, k_B:
  //   <b_A| rho_phase |b_B> = sqrt(k_A k_B) * 2^{-ell m} * [A u B even]
  //   <b_A| rho_haar  |b_B> = delta_AB / D.
  std::vector<std::vector<std::int64_t>> multisets;
  std::vector<double> kcount;
  std::vector<std::int64_t> tuple(m, 0);
  for (;;) {
    multisets.push_back(tuple);
    // distinct permutations of the multiset = m! / prod(multiplicity!)
    {
      double denom = 1.0;
      int run = 1;
      for (int i = 1; i <= m; ++i) {
        if (i < m && tuple[i] == tuple[i - 1]) {
          ++run;
        } else {
          for (int j = 2; j <= run; ++j) denom *= j;
          run = 1;
        }
      }
      double fact = 1.0;
      for (int j = 2; j <= m; ++j) fact *= j;
      kcount.push_back(fact / denom);
    }
    int pos = m - 1;
    while (pos >= 0 && tuple[pos] == base - 1) --pos;
    if (pos < 0) break;
    std::int64_t v = tuple[pos] + 1;
    for (int i = pos; i < m; ++i) tuple[i] = v;
  }

  const std::int64_t sym_dim = static_cast<std::int64_t>(multisets.size());
  if (sym_dim != binomial(base + m - 1, m))
    throw ValidationError("symmetric subspace dimension mismatch");

  const double val = std::pow(2.0, -static_cast<double>(ell) * m);
  const double haar = 1.0 / static_cast<double>(sym_dim);
  Eigen::MatrixXd diff(sym_dim, sym_dim);
  std::vector<std::int64_t> merged(2 * m);
  for (std::int64_t a = 0; a < sym_dim; ++a) {
    for (std::int64_t b = 0; b <= a; ++b) {
      std::copy(multisets[a].begin(), multisets[a].end(), merged.begin());
      std::copy(multisets[b].begin(), multisets[b].end(), merged.begin() + m);
      double phase =
          even_multiset(merged.data(), 2 * m)
              ? std::sqrt(kcount[a] * kcount[b]) * val
              : 0.0;
      double entry = phase - (a == b ? haar : 0.0);
      diff(a, b) = entry;
      diff(b, a) = entry;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff,
                                                    Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

PermutationTable feistel_permutation(const KeyedExpander& key, int ell,
                                     int rounds) {
  if (ell < 2 || ell % 2 != 0)
    throw ValidationError("feistel_permutation: ell must be even and >= 2");
  if (ell > 20) throw BudgetError("feistel_permutation: ell outside budget");
  if (rounds < 0) rounds = ell * ell;
  const int half = ell / 2;
  const std::uint32_t half_mask = (1u << half) - 1;
  const std::size_t d = std::size_t{1} << ell;
  const std::size_t half_size = std::size_t{1} << half;

  // Round tables: half_size entries of half bits each, from disjoint regions.
  std::vector<std::vector<std::uint32_t>> round_fn(rounds);
  for (int r = 0; r < rounds; ++r) {
    std::uint64_t base_bit =
        kFeistelRegion + static_cast<std::uint64_t>(r) * kFeistelRoundStride;
    auto bits = key.expand(base_bit, half_size * static_cast<std::size_t>(half));
    round_fn[r].resize(half_size);
    for (std::size_t x = 0; x < half_size; ++x) {
      std::uint32_t v = 0;
      for (int b = 0; b < half; ++b)
        v = (v << 1) | bits[x * static_cast<std::size_t>(half) + b];
      round_fn[r][x] = v;
    }
  }

  PermutationTable p;
  p.ell = ell;
  p.forward.resize(d);
  for (std::size_t x = 0; x < d; ++x) {
    std::uint32_t left = static_cast<std::uint32_t>(x) >> half;
    std::uint32_t right = static_cast<std::uint32_t>(x) & half_mask;
    for (int r = 0; r < rounds; ++r) {
      std::uint32_t nl = right;
      std::uint32_t nr = left ^ round_fn[r][right];
      left = nl;
      right = nr;
    }
    p.forward[x] = (left << half) | right;
  }
  p.inverse.resize(d);
  for (std::size_t x = 0; x < d; ++x)
    p.inverse[p.forward[x]] = static_cast<std::uint32_t>(x);
  return p;
}

UnitaryMatrix inplace_permutation_unitary(const PermutationTable& p) {
  const std::int64_t d = p.domain_size();
  Matrix u = Matrix::Zero(d, d);
  for (std::int64_t x = 0; x < d; ++x) u(p.forward[x], x) = 1.0;
  return UnitaryMatrix(p.ell, std::move(u));
}

PruComponents pru_components(const KeyedExpander& key, int ell) {
  if (ell < 2 || ell > 6 || ell % 2 != 0)
    throw BudgetError("pru_unitary: ell must be even, 2 <= ell <= 6");
  PruComponents parts;
  parts.permutation = feistel_permutation(key, ell);
  parts.phase_function = prf_table(key, ell);
  std::uint64_t clifford_seed = key.word(kCliffordSeedRegion >> 6);
  parts.clifford = sample_random_clifford(ell, clifford_seed);
  return parts;
}

UnitaryMatrix pru_unitary(const KeyedExpander& key, int ell) {
  PruComponents parts = pru_components(key, ell);
  const std::int64_t d = std::int64_t{1} << ell;
  Matrix c = tableau_to_unitary(parts.clifford).entries();
  // F is the diagonal of (-1)^{f(x)}.
  for (std::int64_t x = 0; x < d; ++x)
    if (parts.phase_function.table[x]) c.row(x) = -c.row(x);
  // U_p acts as a row permutation.
  Matrix u(d, d);
  for (std::int64_t x = 0; x < d; ++x)
    u.row(parts.permutation.forward[x]) = c.row(x);
  return UnitaryMatrix(ell, std::move(u));
}

}  // namespace qprlab
