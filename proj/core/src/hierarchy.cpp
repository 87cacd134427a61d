#include "qprlab/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qprlab/parallel.hpp"

namespace qprlab {

std::vector<Complex> faddeev_leverrier(const Matrix& a) {
  if (a.rows() != a.cols())
    throw DimensionError("faddeev_leverrier: matrix is not square");
  const Eigen::Index d = a.rows();
  if (d > 64) throw BudgetError("faddeev_leverrier: dimension exceeds 64");
  std::vector<Complex> coeffs;
  coeffs.reserve(static_cast<std::size_t>(d) + 1);
  coeffs.push_back(1.0);
  Matrix m = Matrix::Zero(d, d);
  Complex c = 1.0;
  for (Eigen::Index k = 1; k <= d; ++k) {
    m = a * (m + c * Matrix::Identity(d, d));
    c = -m.trace() / static_cast<double>(k);
    coeffs.push_back(c);
  }
  return coeffs;
}

std::vector<double> to_real_coefficients(const std::vector<Complex>& coeffs,
                                         double tol) {
  double scale = 0.0;
  for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
  std::vector<double> out;
  out.reserve(coeffs.size());
  for (const Complex& c : coeffs) {
    if (std::abs(c.imag()) > tol * std::max(1.0, scale))
      throw ValidationError("characteristic polynomial is not real");
    out.push_back(c.real());
  }
  return out;
}

namespace {

// Polynomials as coefficient vectors, highest degree first.

void trim(std::vector<double>& p, double eps) {
  std::size_t lead = 0;
  while (lead + 1 < p.size() && std::abs(p[lead]) <= eps) ++lead;
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(lead));
}

double eval(const std::vector<double>& p, double x) {
  double v = 0.0;
  for (double c : p) v = v * x + c;
  return v;
}

std::vector<double> derivative(const std::vector<double>& p) {
  if (p.size() <= 1) return {0.0};
  std::vector<double> d(p.size() - 1);
  const std::size_t deg = p.size() - 1;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    d[i] = p[i] * static_cast<double>(deg - i);
  return d;
}

// Remainder of num / den (den trimmed, nonzero lead).
std::vector<double> remainder(std::vector<double> num,
                              const std::vector<double>& den) {
  while (num.size() >= den.size()) {
    double factor = num[0] / den[0];
    for (std::size_t i = 0; i < den.size(); ++i) num[i] -= factor * den[i];
    num.erase(num.begin());
  }
  if (num.empty()) num.push_back(0.0);
  return num;
}

std::vector<double> quotient(std::vector<double> num,
                             const std::vector<double>& den) {
  std::vector<double> q;
  while (num.size() >= den.size()) {
    double factor = num[0] / den[0];
    q.push_back(factor);
    for (std::size_t i = 0; i < den.size(); ++i) num[i] -= factor * den[i];
    num.erase(num.begin());
  }
  if (q.empty()) q.push_back(0.0);
  return q;
}

void normalize_max(std::vector<double>& p) {
  double m = 0.0;
  for (double c : p) m = std::max(m, std::abs(c));
  if (m > 0.0)
    for (double& c : p) c /= m;
}

struct SturmChain {
  std::vector<std::vector<double>> seq;

  explicit SturmChain(const std::vector<double>& q) {
    seq.push_back(q);
    std::vector<double> d = derivative(q);
    trim(d, 0.0);
    if (!(d.size() == 1 && d[0] == 0.0)) seq.push_back(d);
    while (seq.back().size() > 1) {
      std::vector<double> r = remainder(seq[seq.size() - 2], seq.back());
      for (double& c : r) c = -c;
      trim(r, 1e-14);
      normalize_max(r);
      double mag = 0.0;
      for (double c : r) mag = std::max(mag, std::abs(c));
      if (mag <= 1e-13) break;
      seq.push_back(std::move(r));
    }
  }

  int variations(double x) const {
    int count = 0, last = 0;
    for (const auto& p : seq) {
      double v = eval(p, x);
      int s = v > 1e-300 ? 1 : (v < -1e-300 ? -1 : 0);
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }
};

double newton_polish(const std::vector<double>& q, const std::vector<double>& dq,
                     double x, double lo, double hi) {
  for (int it = 0; it < 64; ++it) {
    double f = eval(q, x);
    double df = eval(dq, x);
    if (df == 0.0) break;
    double nx = x - f / df;
    if (nx < lo || nx > hi) break;
    if (std::abs(nx - x) < 1e-15 * std::max(1.0, std::abs(x))) {
      x = nx;
      break;
    }
    x = nx;
  }
  return x;
}

}  // namespace

std::vector<double> real_roots(std::vector<double> coeffs) {
  trim(coeffs, 0.0);
  if (coeffs.empty() || (coeffs.size() == 1 && coeffs[0] == 0.0))
    throw ValidationError("real_roots: zero polynomial");
  const std::size_t degree = coeffs.size() - 1;
  if (degree == 0) return {};
  // Monic normalization.
  for (double& c : coeffs) c /= coeffs[0];
  std::vector<double> p = coeffs;

  // Square-free part via one gcd(p, p') pass.
  std::vector<double> a = p, b = derivative(p);
  trim(b, 0.0);
  normalize_max(b);
  std::vector<double> gcd{1.0};
  while (b.size() > 1) {
    std::vector<double> r = remainder(a, b);
    trim(r, 1e-12);
    double mag = 0.0;
    for (double c : r) mag = std::max(mag, std::abs(c));
    if (mag <= 1e-10) {
      gcd = b;
      break;
    }
    normalize_max(r);
    a = b;
    b = r;
  }
  std::vector<double> q = p;
  if (gcd.size() > 1) {
    for (double& c : gcd) c /= gcd[0];
    q = quotient(p, gcd);
    trim(q, 0.0);
    for (double& c : q) c /= q[0];
  }

  // Cauchy bound for the monic square-free part.
  double bound = 0.0;
  for (std::size_t i = 1; i < q.size(); ++i)
    bound = std::max(bound, std::abs(q[i]));
  bound += 1.0;

  SturmChain chain(q);
  std::vector<double> dq = derivative(q);

  std::vector<double> distinct;
  std::vector<std::pair<double, double>> stack{{-bound, bound}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    int count = chain.variations(lo) - chain.variations(hi);
    if (count <= 0) continue;
    if (count == 1) {
      double a0 = lo, b0 = hi;
      while (b0 - a0 > 1e-12) {
        double mid = 0.5 * (a0 + b0);
        if (chain.variations(a0) - chain.variations(mid) >= 1)
          b0 = mid;
        else
          a0 = mid;
      }
      distinct.push_back(newton_polish(q, dq, 0.5 * (a0 + b0), lo, hi));
      continue;
    }
    double mid = 0.5 * (lo + hi);
    stack.push_back({lo, mid});
    stack.push_back({mid, hi});
  }
  std::sort(distinct.begin(), distinct.end());

  // Multiplicities by deflating the original polynomial.
  std::vector<double> roots;
  std::vector<double> work = p;
  double pmag = 0.0;
  for (double c : p) pmag = std::max(pmag, std::abs(c));
  const double defl_tol = 1e-6 * std::max(1.0, pmag);
  for (double r : distinct) {
    int mult = 0;
    while (work.size() > 1 && std::abs(eval(work, r)) <= defl_tol) {
      // Synthetic division by (x - r).
      std::vector<double> next(work.size() - 1);
      double carry = 0.0;
      for (std::size_t i = 0; i + 1 < work.size(); ++i) {
        carry = work[i] + carry * r;
        next[i] = carry;
      }
      work = std::move(next);
      ++mult;
    }
    if (mult == 0) ++mult;  // isolated root of q must divide p at least once
    for (int i = 0; i < mult; ++i) roots.push_back(r);
  }
  if (roots.size() != degree)
    throw ValidationError(
        "real_roots: residual check failed (input may not be real-rooted)");
  std::sort(roots.begin(), roots.end());
  return roots;
}

double trace_distance_charpoly(const DensityMatrix& rho,
                               const DensityMatrix& sigma) {
  require_same_qubits(rho.num_qubits(), sigma.num_qubits(),
                      "trace_distance_charpoly");
  Matrix diff = rho.entries() - sigma.entries();
  diff = 0.5 * (diff + diff.adjoint());
  std::vector<double> coeffs = to_real_coefficients(faddeev_leverrier(diff));
  // The difference of density matrices can be (numerically) nilpotent; a
  // zero polynomial tail is fine for root finding, but an all-zero input
  // means every eigenvalue vanishes.
  bool all_zero = true;
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    if (std::abs(coeffs[i]) > 1e-14) all_zero = false;
  if (all_zero) return 0.0;
  std::vector<double> roots = real_roots(coeffs);
  double sum = 0.0;
  for (double r : roots) sum += std::abs(r);
  return 0.5 * sum;
}

namespace {

double separation_threshold(double epsilon) {
  return std::max(epsilon, 1e-9);
}

}  // namespace

PackingResult greedy_packing(const std::vector<Statevector>& states,
                             double epsilon) {
  const double thr = separation_threshold(epsilon);
  PackingResult res;
  for (std::size_t i = 0; i < states.size(); ++i) {
    bool separated = true;
    for (std::size_t j : res.indices) {
      if (trace_distance_pure(states[i], states[j]) < thr) {
        separated = false;
        break;
      }
    }
    if (separated) res.indices.push_back(i);
  }
  res.count = res.indices.size();
  return res;
}

PackingResult exact_packing(const std::vector<Statevector>& states,
                            double epsilon) {
  const std::size_t n = states.size();
  if (n > 18) throw BudgetError("exact_packing supports at most 18 states");
  const double thr = separation_threshold(epsilon);
  std::vector<std::uint32_t> far(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (trace_distance_pure(states[i], states[j]) >= thr) {
        far[i] |= 1u << j;
        far[j] |= 1u << i;
      }

  std::uint32_t best_mask = 0;
  int best = 0;
  // Max clique in the "far" graph by branch and bound over candidate masks.
  auto popcount = [](std::uint32_t m) { return __builtin_popcount(m); };
  std::function<void(std::uint32_t, std::uint32_t)> grow =
      [&](std::uint32_t chosen, std::uint32_t candidates) {
        if (popcount(chosen) + popcount(candidates) <= best) return;
        if (candidates == 0) {
          if (popcount(chosen) > best) {
            best = popcount(chosen);
            best_mask = chosen;
          }
          return;
        }
        std::uint32_t v = candidates & (~candidates + 1);  // lowest bit
        int vi = __builtin_ctz(v);
        grow(chosen | v, candidates & far[static_cast<std::size_t>(vi)] & ~v);
        grow(chosen, candidates & ~v);
      };
  grow(0, n == 32 ? ~0u : ((1u << n) - 1));

  PackingResult res;
  for (std::size_t i = 0; i < n; ++i)
    if (best_mask & (1u << i)) res.indices.push_back(i);
  res.count = res.indices.size();
  return res;
}

double packing_alpha(const PackingFormulaParams& p) {
  p.validate();
  double ratio = p.r / (static_cast<double>(p.n) * p.n * p.c);
  if (ratio <= 0.0) return 0.0;
  return std::floor(std::pow(ratio, 1.0 / 11.0));
}

double packing_lower_formula(const PackingFormulaParams& p) {
  double alpha = packing_alpha(p);
  if (alpha < 1.0) return 1.0;
  double base = std::pow(2.0, p.n) * (1.0 - 4.0 * p.eps * p.eps) / alpha;
  return std::pow(base, alpha);
}

double counting_upper_bound_log2(std::size_t s) {
  return static_cast<double>(encoded_bits(s));
}

double counting_upper_bound(std::size_t s) {
  double log2v = counting_upper_bound_log2(s);
  if (log2v > 1023.0) return std::numeric_limits<double>::infinity();
  return std::exp2(log2v);
}

double hierarchy_size_map(std::size_t s, int n, double c) {
  if (n < 1 || c <= 0.0)
    throw ValidationError("hierarchy_size_map: bad parameters");
  return std::pow(static_cast<double>(s), 12.0) * static_cast<double>(n) *
         static_cast<double>(n) * c;
}

DiagonalizationResult diagonalization_search(const DiagonalizationParams& p) {
  if (p.gap < 0.0 || p.tol < 0.0)
    throw ValidationError("diagonalization_search: gap and tol must be >= 0");
  DiagonalizationResult result;

  // Materialize the inner states once: every size-s circuit with ancilla.
  std::vector<DensityMatrix> inner_states;
  {
    CircuitEnumerator inner(static_cast<std::uint32_t>(p.n), p.s);
    while (auto c = inner.next()) {
      if (inner_states.size() >= p.max_inner)
        throw BudgetError("diagonalization_search: inner enumeration budget");
      inner_states.push_back(simulate(*c));
    }
  }
  result.inner_circuits = inner_states.size();

  EnumerationOptions no_ancilla;
  no_ancilla.unitary_only = true;
  CircuitEnumerator outer(static_cast<std::uint32_t>(p.n), p.s_prime,
                          no_ancilla);
  std::uint64_t candidate_index = 0;
  while (auto v = outer.next()) {
    if (candidate_index >= p.max_candidates) break;
    Statevector phi = simulate_pure(*v);
    DensityMatrix phi_dm = DensityMatrix::from_pure(phi);

    // Chunked scan in enumeration order; distances are deterministic per
    // index, so the first disqualifying index does not depend on the
    // worker count.
    const std::size_t chunk = 256;
    double min_dist = std::numeric_limits<double>::infinity();
    bool disqualified = false;
    for (std::size_t base = 0; base < inner_states.size() && !disqualified;
         base += chunk) {
      std::size_t count = std::min(chunk, inner_states.size() - base);
      std::vector<double> dist(count);
      parallel_for(count, [&](std::size_t k) {
        dist[k] = trace_distance_charpoly(inner_states[base + k], phi_dm);
      });
      for (std::size_t k = 0; k < count; ++k) {
        min_dist = std::min(min_dist, dist[k]);
        if (dist[k] <= p.gap) {
          disqualified = true;
          break;
        }
      }
    }
    if (inner_states.empty()) min_dist = std::numeric_limits<double>::infinity();

    DiagonalizationRecord rec;
    rec.candidate_index = candidate_index;
    rec.min_distance = min_dist;
    rec.disqualified_early = disqualified;
    result.records.push_back(rec);

    if (!disqualified && min_dist > p.gap) {
      result.found = true;
      result.witness = *v;
      result.witness_min_distance = min_dist;
      result.witness_index = candidate_index;
      result.candidates_scanned = candidate_index + 1;
      return result;
    }
    if (min_dist > result.best_min_distance &&
        min_dist != std::numeric_limits<double>::infinity()) {
      result.best_min_distance = min_dist;
      result.best_index = candidate_index;
      result.best_candidate = *v;
    }
    ++candidate_index;
  }
  result.candidates_scanned = candidate_index;
  return result;
}

}  // namespace qprlab
