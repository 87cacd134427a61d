#include "qprlab/clifford.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "qprlab/rng.hpp"

namespace qprlab {

bool PauliRow::commutes_with(const PauliRow& o) const {
  int anti = std::popcount(x & o.z) + std::popcount(z & o.x);
  return (anti & 1) == 0;
}

CliffordTableau CliffordTableau::identity(int n) {
  CliffordTableau t;
  t.n = n;
  t.x_images.resize(n);
  t.z_images.resize(n);
  for (int j = 0; j < n; ++j) {
    t.x_images[j].x = 1u << j;
    t.z_images[j].z = 1u << j;
  }
  return t;
}

bool CliffordTableau::is_valid() const {
  if (static_cast<int>(x_images.size()) != n ||
      static_cast<int>(z_images.size()) != n)
    return false;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (!x_images[j].commutes_with(x_images[k])) return false;
      if (!z_images[j].commutes_with(z_images[k])) return false;
      bool anti = !x_images[j].commutes_with(z_images[k]);
      if (anti != (j == k)) return false;
    }
  return true;
}

namespace {

void conj_h(PauliRow& p, int q) {
  std::uint32_t b = 1u << q;
  bool xq = p.x & b, zq = p.z & b;
  if (xq && zq) p.negative = !p.negative;
  p.x = (p.x & ~b) | (zq ? b : 0);
  p.z = (p.z & ~b) | (xq ? b : 0);
}

void conj_s(PauliRow& p, int q) {
  std::uint32_t b = 1u << q;
  bool xq = p.x & b, zq = p.z & b;
  if (xq && zq) p.negative = !p.negative;
  if (xq) p.z ^= b;
}

void conj_sdg(PauliRow& p, int q) {
  // Sdg = S^3
  conj_s(p, q);
  conj_s(p, q);
  conj_s(p, q);
}

void conj_cnot(PauliRow& p, int c, int t) {
  std::uint32_t bc = 1u << c, bt = 1u << t;
  bool xc = p.x & bc, zc = p.z & bc, xt = p.x & bt, zt = p.z & bt;
  if (xc && zt && (xt == zc)) p.negative = !p.negative;
  if (xc) p.x ^= bt;
  if (zt) p.z ^= bc;
}

}  // namespace

void CliffordTableau::apply_h(int q) {
  for (auto& r : x_images) conj_h(r, q);
  for (auto& r : z_images) conj_h(r, q);
}

void CliffordTableau::apply_s(int q) {
  for (auto& r : x_images) conj_s(r, q);
  for (auto& r : z_images) conj_s(r, q);
}

void CliffordTableau::apply_sdg(int q) {
  for (auto& r : x_images) conj_sdg(r, q);
  for (auto& r : z_images) conj_sdg(r, q);
}

void CliffordTableau::apply_cnot(int c, int t) {
  for (auto& r : x_images) conj_cnot(r, c, t);
  for (auto& r : z_images) conj_cnot(r, c, t);
}

CliffordTableau tableau_from_gates(int n,
                                   const std::vector<CliffordGate>& gates) {
  CliffordTableau t = CliffordTableau::identity(n);
  for (const CliffordGate& g : gates) {
    switch (g.kind) {
      case CliffordGateKind::H:
        t.apply_h(g.a);
        break;
      case CliffordGateKind::S:
        t.apply_s(g.a);
        break;
      case CliffordGateKind::Sdg:
        t.apply_sdg(g.a);
        break;
      case CliffordGateKind::Cnot:
        t.apply_cnot(g.a, g.b);
        break;
    }
  }
  return t;
}

namespace {

void conj_gate(PauliRow& p, const CliffordGate& g) {
  switch (g.kind) {
    case CliffordGateKind::H:
      conj_h(p, g.a);
      break;
    case CliffordGateKind::S:
      conj_s(p, g.a);
      break;
    case CliffordGateKind::Sdg:
      conj_sdg(p, g.a);
      break;
    case CliffordGateKind::Cnot:
      conj_cnot(p, g.a, g.b);
      break;
  }
}

void emit(std::vector<CliffordGate>& gates, PauliRow& p, PauliRow& q,
          CliffordGate g) {
  gates.push_back(g);
  conj_gate(p, g);
  conj_gate(q, g);
}

// Pauli sign flips expressed through S and H.
void emit_z(std::vector<CliffordGate>& gates, PauliRow& p, PauliRow& q, int t) {
  emit(gates, p, q, {CliffordGateKind::S, t});
  emit(gates, p, q, {CliffordGateKind::S, t});
}

void emit_x(std::vector<CliffordGate>& gates, PauliRow& p, PauliRow& q, int t) {
  emit(gates, p, q, {CliffordGateKind::H, t});
  emit_z(gates, p, q, t);
  emit(gates, p, q, {CliffordGateKind::H, t});
}

// Clears the X support of p down to the single qubit j, assuming p is X-only.
void compress_x_support(std::vector<CliffordGate>& gates, PauliRow& p,
                        PauliRow& q, int j, int n) {
  int first = -1;
  for (int t = j; t < n; ++t)
    if (p.x & (1u << t)) {
      first = t;
      break;
    }
  for (int t = first + 1; t < n; ++t)
    if (p.x & (1u << t))
      emit(gates, p, q, {CliffordGateKind::Cnot, first, t});
  if (first != j) {
    // SWAP(first, j) as three CNOTs.
    emit(gates, p, q, {CliffordGateKind::Cnot, first, j});
    emit(gates, p, q, {CliffordGateKind::Cnot, j, first});
    emit(gates, p, q, {CliffordGateKind::Cnot, first, j});
  }
}

// Turns every Z/Y component of p into X; safe to call when p's support lies
// in [j, n).
void make_x_only(std::vector<CliffordGate>& gates, PauliRow& p, PauliRow& q,
                 int j, int n) {
  for (int t = j; t < n; ++t) {
    std::uint32_t b = 1u << t;
    bool xt = p.x & b, zt = p.z & b;
    if (xt && zt) {
      emit(gates, p, q, {CliffordGateKind::Sdg, t});  // Y -> X
    } else if (!xt && zt) {
      emit(gates, p, q, {CliffordGateKind::H, t});  // Z -> X
    }
  }
}

// Gate sequence mapping the anticommuting pair (p, q) to (+X_j, +Z_j).
std::vector<CliffordGate> sweep_pair(PauliRow p, PauliRow q, int j, int n) {
  std::vector<CliffordGate> gates;

  make_x_only(gates, p, q, j, n);
  compress_x_support(gates, p, q, j, n);
  // p is now +-X_j. Fix q, which anticommutes with X_j.
  PauliRow zj;
  zj.z = 1u << j;
  if (!(q.x == 0 && q.z == zj.z)) {
    emit(gates, p, q, {CliffordGateKind::H, j});  // p -> Z_j
    // q now anticommutes with Z_j, so it carries X on qubit j; sweep it to
    // X_j without disturbing Z_j (S/H act off j, CNOTs are controlled on j).
    make_x_only(gates, q, p, j, n);
    compress_x_support(gates, q, p, j, n);
    emit(gates, p, q, {CliffordGateKind::H, j});  // p -> X_j, q -> Z_j
  }
  if (p.negative) emit_z(gates, p, q, j);
  if (q.negative) emit_x(gates, p, q, j);
  return gates;
}

PauliRow random_pauli_on(Rng& rng, int j, int n, bool force_nonidentity) {
  std::uint32_t span = static_cast<std::uint32_t>((1u << (n - j)) - 1) << j;
  PauliRow p;
  do {
    std::uint64_t r = rng.next_u64();
    p.x = static_cast<std::uint32_t>(r) & span;
    p.z = static_cast<std::uint32_t>(r >> 32) & span;
  } while (force_nonidentity && p.identity());
  p.negative = rng.next_bit();
  return p;
}

}  // namespace

CliffordSample sample_random_clifford_circuit(int n, std::uint64_t seed) {
  if (n < 1 || n > 16)
    throw BudgetError("clifford sampling supports 1 <= n <= 16");
  Rng rng(seed);
  // C = W_0^{-1} W_1^{-1} ... ; as a circuit the innermost sweep comes first.
  std::vector<std::vector<CliffordGate>> sweeps(n);
  for (int j = 0; j < n; ++j) {
    PauliRow p = random_pauli_on(rng, j, n, true);
    PauliRow q;
    do {
      q = random_pauli_on(rng, j, n, false);
    } while (p.commutes_with(q));
    sweeps[j] = sweep_pair(p, q, j, n);
  }
  CliffordSample out;
  for (int j = n - 1; j >= 0; --j) {
    for (auto it = sweeps[j].rbegin(); it != sweeps[j].rend(); ++it) {
      CliffordGate inv = *it;
      if (inv.kind == CliffordGateKind::S)
        inv.kind = CliffordGateKind::Sdg;
      else if (inv.kind == CliffordGateKind::Sdg)
        inv.kind = CliffordGateKind::S;
      out.gates.push_back(inv);
    }
  }
  out.tableau = tableau_from_gates(n, out.gates);
  return out;
}

CliffordTableau sample_random_clifford(int n, std::uint64_t seed) {
  return sample_random_clifford_circuit(n, seed).tableau;
}

Vector apply_pauli(const PauliRow& p, const Vector& amps) {
  const std::int64_t size = amps.size();
  Vector out(size);
  int y_count = std::popcount(p.x & p.z);
  Complex phase(1.0, 0.0);
  switch (y_count & 3) {
    case 0: phase = {1.0, 0.0}; break;
    case 1: phase = {0.0, 1.0}; break;
    case 2: phase = {-1.0, 0.0}; break;
    case 3: phase = {0.0, -1.0}; break;
  }
  if (p.negative) phase = -phase;
  for (std::int64_t b = 0; b < size; ++b) {
    double zsign =
        (std::popcount(static_cast<std::uint64_t>(b) & p.z) & 1) ? -1.0 : 1.0;
    out(b ^ p.x) = phase * zsign * amps(b);
  }
  return out;
}

UnitaryMatrix tableau_to_unitary(const CliffordTableau& t) {
  if (t.n > 10) throw BudgetError("tableau_to_unitary supports n <= 10");
  if (!t.is_valid())
    throw ValidationError("tableau violates the symplectic relations");
  const std::int64_t d = dim_of(t.n);

  // |phi0> is the state stabilized by the signed Z images: project a basis
  // state through prod_j (I + S_j)/2 and normalize. The global phase is
  // whatever this projection yields (first successful basis column).
  Vector phi0;
  bool found = false;
  for (std::int64_t r = 0; r < d && !found; ++r) {
    Vector v = Vector::Zero(d);
    v(r) = 1.0;
    for (int j = 0; j < t.n; ++j) v = 0.5 * (v + apply_pauli(t.z_images[j], v));
    double norm = v.norm();
    if (norm > 1e-6) {
      phi0 = v / norm;
      found = true;
    }
  }
  if (!found)
    throw ValidationError("stabilizer projector annihilated every basis state");

  // Column x equals (prod_{j: x_j = 1} image(X_j)) |phi0>.
  Matrix u(d, d);
  for (std::int64_t x = 0; x < d; ++x) {
    Vector col = phi0;
    for (int j = 0; j < t.n; ++j)
      if (x & (std::int64_t{1} << j)) col = apply_pauli(t.x_images[j], col);
    u.col(x) = col;
  }
  return UnitaryMatrix(t.n, std::move(u));
}

CircuitDescription clifford_gates_to_circuit(
    const std::vector<CliffordGate>& gates) {
  std::vector<GateOp> ops;
  std::uint32_t top = 0;
  auto push = [&](GateKind k, int a, int b = 0) {
    GateOp g;
    g.kind = k;
    g.qubit_a = static_cast<std::uint32_t>(a);
    g.qubit_b = static_cast<std::uint32_t>(b);
    g.layer = 0;
    top = std::max(top, g.qubit_a + 1);
    if (k == GateKind::Cnot) top = std::max(top, g.qubit_b + 1);
    ops.push_back(g);
  };
  for (const CliffordGate& g : gates) {
    switch (g.kind) {
      case CliffordGateKind::H:
        push(GateKind::H, g.a);
        break;
      case CliffordGateKind::S:
        push(GateKind::T, g.a);
        push(GateKind::T, g.a);
        break;
      case CliffordGateKind::Sdg:
        for (int i = 0; i < 6; ++i) push(GateKind::T, g.a);
        break;
      case CliffordGateKind::Cnot:
        push(GateKind::Cnot, g.a, g.b);
        break;
    }
  }
  // The encoding addresses qubits < 2s; pad with H pairs (identity) until
  // the register fits.
  while (2 * ops.size() < top) {
    push(GateKind::H, 0);
    push(GateKind::H, 0);
  }
  return CircuitDescription::from_gates(std::move(ops));
}

std::vector<CliffordTableau> enumerate_clifford_tableaus(int n) {
  if (n < 1 || n > 2)
    throw BudgetError("tableau enumeration is exhaustive, n <= 2 only");
  std::vector<CliffordTableau> all;
  const int rows = 2 * n;
  const std::uint32_t per_row = 1u << (2 * n);  // x and z masks per row
  std::vector<std::uint32_t> codes(rows, 0);
  for (;;) {
    CliffordTableau t;
    t.n = n;
    t.x_images.resize(n);
    t.z_images.resize(n);
    for (int r = 0; r < rows; ++r) {
      PauliRow p;
      p.x = codes[r] & ((1u << n) - 1);
      p.z = codes[r] >> n;
      if (r < n)
        t.x_images[r] = p;
      else
        t.z_images[r - n] = p;
    }
    if (t.is_valid()) {
      // All 2^{2n} sign patterns are valid together with a valid symplectic
      // part.
      for (std::uint32_t signs = 0; signs < (1u << rows); ++signs) {
        CliffordTableau ts = t;
        for (int j = 0; j < n; ++j) {
          ts.x_images[j].negative = (signs >> j) & 1;
          ts.z_images[j].negative = (signs >> (n + j)) & 1;
        }
        all.push_back(std::move(ts));
      }
    }
    int pos = rows - 1;
    while (pos >= 0 && codes[pos] == per_row - 1) {
      codes[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++codes[pos];
  }
  return all;
}

std::vector<Statevector> enumerate_stabilizer_states(int n) {
  if (n < 1 || n > 3)
    throw BudgetError("stabilizer enumeration supports n <= 3");
  const std::int64_t d = dim_of(n);

  auto canonical_key = [d](const Vector& v) {
    // Normalize global phase: first amplitude with |a| > tol becomes
    // positive real.
    Complex pivot(0, 0);
    for (std::int64_t i = 0; i < d; ++i)
      if (std::abs(v(i)) > 1e-6) {
        pivot = v(i);
        break;
      }
    Complex rot = std::conj(pivot) / std::abs(pivot);
    std::string key;
    key.reserve(static_cast<std::size_t>(d) * 8);
    char buf[40];
    for (std::int64_t i = 0; i < d; ++i) {
      Complex a = v(i) * rot;
      // Snap to a 1e-6 grid; adding 0.0 clears negative zero.
      double re = std::round(a.real() * 1e6) / 1e6 + 0.0;
      double im_part = std::round(a.imag() * 1e6) / 1e6 + 0.0;
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f;", re, im_part);
      key += buf;
    }
    return key;
  };

  std::vector<Vector> states;
  std::map<std::string, std::size_t> seen;
  std::vector<std::size_t> frontier;

  Vector zero = Vector::Zero(d);
  zero(0) = 1.0;
  seen[canonical_key(zero)] = 0;
  states.push_back(zero);
  frontier.push_back(0);

  const Complex im(0.0, 1.0);
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (int q = 0; q < n; ++q) {
        for (int gate = 0; gate < 2; ++gate) {
          Vector v = states[idx];
          if (gate == 0) {
            apply_h(v, q);
          } else {
            // S gate
            const std::int64_t b = std::int64_t{1} << q;
            for (std::int64_t i = 0; i < d; ++i)
              if (i & b) v(i) *= im;
          }
          std::string key = canonical_key(v);
          if (!seen.count(key)) {
            seen[key] = states.size();
            next.push_back(states.size());
            states.push_back(std::move(v));
          }
        }
      }
      for (int c = 0; c < n; ++c)
        for (int t = 0; t < n; ++t) {
          if (c == t) continue;
          Vector v = states[idx];
          apply_cnot(v, c, t);
          std::string key = canonical_key(v);
          if (!seen.count(key)) {
            seen[key] = states.size();
            next.push_back(states.size());
            states.push_back(std::move(v));
          }
        }
    }
    frontier = std::move(next);
  }

  std::vector<Statevector> out;
  out.reserve(states.size());
  for (auto& v : states) {
    v.normalize();
    out.emplace_back(n, std::move(v));
  }
  return out;
}

}  // namespace qprlab
