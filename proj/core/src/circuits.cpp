#include "qprlab/circuits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace qprlab {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::uint64_t bit(std::uint32_t q) { return std::uint64_t{1} << q; }

}  // namespace

bool CircuitDescription::unitary_only() const {
  return std::none_of(gates.begin(), gates.end(), [](const GateOp& g) {
    return g.kind == GateKind::TraceOut;
  });
}

std::vector<std::uint32_t> CircuitDescription::traced_qubits() const {
  std::vector<std::uint32_t> t;
  for (const GateOp& g : gates)
    if (g.kind == GateKind::TraceOut) t.push_back(g.qubit_a);
  return t;
}

CircuitDescription CircuitDescription::from_gates(std::vector<GateOp> gates) {
  std::uint32_t w = 0;
  std::uint32_t traced = 0;
  for (const GateOp& g : gates) {
    w = std::max(w, g.qubit_a + 1);
    if (g.kind == GateKind::Cnot) w = std::max(w, g.qubit_b + 1);
    if (g.kind == GateKind::TraceOut) ++traced;
  }
  CircuitDescription c;
  c.n_space = w;
  c.n_out = w - traced;
  c.gates = std::move(gates);
  return c;
}

CircuitDescription CircuitDescription::empty(std::uint32_t n_out) {
  CircuitDescription c;
  c.n_out = n_out;
  c.n_space = n_out;
  return c;
}

unsigned ceil_log2(std::uint64_t x) {
  unsigned w = 0;
  while ((std::uint64_t{1} << w) < x) ++w;
  return w;
}

unsigned qubit_field_width(std::size_t s) {
  return s == 0 ? 0 : std::max(1u, ceil_log2(2 * s));
}

unsigned layer_field_width(std::size_t s) { return s == 0 ? 0 : ceil_log2(s); }

unsigned bits_per_gate(std::size_t s) {
  return s == 0 ? 0 : 2 + 2 * qubit_field_width(s) + layer_field_width(s);
}

std::size_t encoded_bits(std::size_t s) { return s * bits_per_gate(s); }

Bitstring encode(const CircuitDescription& c) {
  std::size_t s = c.size();
  unsigned qw = qubit_field_width(s);
  unsigned lw = layer_field_width(s);
  Bitstring out;
  for (const GateOp& g : c.gates) {
    if (g.qubit_a >= 2 * s || g.qubit_b >= 2 * s)
      throw ValidationError("encode: qubit index overflows the layout for s");
    if (g.layer >= s && !(s == 1 && g.layer == 0))
      throw ValidationError("encode: layer index overflows the layout for s");
    out.append_field(static_cast<std::uint64_t>(g.kind), 2);
    out.append_field(g.qubit_a, qw);
    out.append_field(g.qubit_b, qw);
    out.append_field(g.layer, lw);
  }
  return out;
}

namespace {

struct GateChecker {
  std::size_t s;
  bool after_traceout = false;
  std::uint32_t last_layer = 0;
  std::uint64_t traced_mask = 0;

  void check(const GateOp& g, std::size_t i) {
    if (g.qubit_a >= 2 * s)
      throw ParseError("gate qubit_a out of range", i);
    if (g.kind == GateKind::Cnot) {
      if (g.qubit_b >= 2 * s)
        throw ParseError("gate qubit_b out of range", i);
      if (g.qubit_a == g.qubit_b)
        throw ParseError("CNOT control equals target", i);
    } else if (g.qubit_b != 0) {
      throw ParseError("unused qubit_b field must be zero", i);
    }
    if (g.layer >= s && !(s == 1 && g.layer == 0))
      throw ParseError("layer index out of range", i);
    if (i > 0 && g.layer < last_layer)
      throw ParseError("layers must be non-decreasing", i);
    last_layer = g.layer;
    if (g.kind == GateKind::TraceOut) {
      if (traced_mask & bit(g.qubit_a))
        throw ParseError("qubit traced out twice", i);
      traced_mask |= bit(g.qubit_a);
      after_traceout = true;
    } else if (after_traceout) {
      throw ParseError("unitary gate after a TraceOut", i);
    }
  }
};

}  // namespace

CircuitDescription decode(const Bitstring& bits, std::size_t s) {
  if (bits.size() != encoded_bits(s))
    throw ParseError("payload length does not match the layout for s");
  unsigned qw = qubit_field_width(s);
  unsigned lw = layer_field_width(s);
  std::vector<GateOp> gates;
  gates.reserve(s);
  GateChecker checker{s};
  std::size_t pos = 0;
  for (std::size_t i = 0; i < s; ++i) {
    GateOp g;
    g.kind = static_cast<GateKind>(bits.read_field(pos, 2));
    pos += 2;
    g.qubit_a = static_cast<std::uint32_t>(bits.read_field(pos, qw));
    pos += qw;
    g.qubit_b = static_cast<std::uint32_t>(bits.read_field(pos, qw));
    pos += qw;
    g.layer = static_cast<std::uint32_t>(bits.read_field(pos, lw));
    pos += lw;
    checker.check(g, i);
    gates.push_back(g);
  }
  return CircuitDescription::from_gates(std::move(gates));
}

// --- enumeration -------------------------------------------------------------

CircuitEnumerator::CircuitEnumerator(std::uint32_t n_out, std::size_t s,
                                     EnumerationOptions opts,
                                     std::uint64_t start_index)
    : n_out_(n_out), s_(s), opts_(opts) {
  if (s_ > 31) throw BudgetError("enumeration is limited to s <= 31");
  if (n_out_ + s_ > 62)
    throw BudgetError("enumeration register would overflow the qubit masks");
  qw_ = qubit_field_width(s_);
  lw_ = layer_field_width(s_);
  gw_ = bits_per_gate(s_);
  code_count_ = s_ == 0 ? 0 : (std::uint64_t{1} << gw_);
  codes_.resize(s_);
  gates_.resize(s_);
  states_.resize(s_ + 1);
  for (std::uint64_t i = 0; i < start_index; ++i)
    if (!next()) break;
}

bool CircuitEnumerator::gate_from_code(std::uint64_t code, GateOp& g) const {
  g.layer = static_cast<std::uint32_t>(code & ((1u << lw_) - 1));
  code >>= lw_;
  g.qubit_b = static_cast<std::uint32_t>(code & ((1u << qw_) - 1));
  code >>= qw_;
  g.qubit_a = static_cast<std::uint32_t>(code & ((1u << qw_) - 1));
  code >>= qw_;
  g.kind = static_cast<GateKind>(code);

  if (g.qubit_a >= 2 * s_) return false;
  if (g.kind == GateKind::Cnot) {
    if (g.qubit_b >= 2 * s_ || g.qubit_a == g.qubit_b) return false;
  } else if (g.qubit_b != 0) {
    return false;
  }
  if (g.layer >= s_ && !(s_ == 1 && g.layer == 0)) return false;
  return true;
}

bool CircuitEnumerator::admissible(const PrefixState& st, const GateOp& g,
                                   std::size_t slot) const {
  if (slot > 0 && g.layer < st.last_layer) return false;
  if (g.kind == GateKind::TraceOut) {
    if (opts_.unitary_only) return false;
    if (g.qubit_a < n_out_) return false;  // outputs are never discarded
    if (st.traced_mask & bit(g.qubit_a)) return false;
  } else {
    if (st.after_traceout) return false;
    if (opts_.unitary_only) {
      std::uint32_t top = g.kind == GateKind::Cnot
                              ? std::max(g.qubit_a, g.qubit_b)
                              : g.qubit_a;
      if (top >= n_out_) return false;
    }
  }
  // Every touched ancilla must still be traceable with the remaining slots.
  PrefixState nx = advance_state(st, g);
  std::uint64_t output_mask = bit(n_out_) - 1;
  std::uint64_t owed = nx.unitary_mask & ~nx.traced_mask & ~output_mask;
  std::size_t remaining = s_ - slot - 1;
  if (static_cast<std::size_t>(std::popcount(owed)) > remaining) return false;
  return true;
}

CircuitEnumerator::PrefixState CircuitEnumerator::advance_state(
    const PrefixState& st, const GateOp& g) const {
  PrefixState nx = st;
  nx.last_layer = g.layer;
  nx.touched_mask |= bit(g.qubit_a);
  if (g.kind == GateKind::Cnot) {
    nx.touched_mask |= bit(g.qubit_b);
    nx.unitary_mask |= bit(g.qubit_a) | bit(g.qubit_b);
  } else if (g.kind == GateKind::TraceOut) {
    nx.traced_mask |= bit(g.qubit_a);
    nx.after_traceout = true;
  } else {
    nx.unitary_mask |= bit(g.qubit_a);
  }
  return nx;
}

bool CircuitEnumerator::leaf_valid() const {
  const PrefixState& st = states_[s_];
  std::uint32_t traced = static_cast<std::uint32_t>(std::popcount(st.traced_mask));
  std::uint32_t space = n_out_ + traced;
  // Canonical register: traced qubits are exactly [n_out, space) and no gate
  // reaches past it.
  std::uint64_t want = traced == 0 ? 0 : ((bit(space) - 1) & ~(bit(n_out_) - 1));
  if (st.traced_mask != want) return false;
  if (space < 64 && (st.touched_mask & ~(bit(space) - 1))) return false;
  return true;
}

std::optional<CircuitDescription> CircuitEnumerator::next() {
  if (done_) return std::nullopt;
  if (s_ == 0) {
    done_ = true;
    if (!emitted_empty_) {
      emitted_empty_ = true;
      ++yielded_;
      return CircuitDescription::empty(n_out_);
    }
    return std::nullopt;
  }
  for (;;) {
    if (trying_ >= code_count_) {
      if (depth_ == 0) {
        done_ = true;
        return std::nullopt;
      }
      --depth_;
      trying_ = codes_[depth_] + 1;
      continue;
    }
    GateOp g;
    if (!gate_from_code(trying_, g) ||
        !admissible(states_[depth_], g, depth_)) {
      ++trying_;
      continue;
    }
    codes_[depth_] = trying_;
    gates_[depth_] = g;
    states_[depth_ + 1] = advance_state(states_[depth_], g);
    ++depth_;
    if (depth_ == s_) {
      bool ok = leaf_valid();
      CircuitDescription result;
      if (ok) {
        result.n_out = n_out_;
        result.n_space =
            n_out_ + static_cast<std::uint32_t>(std::popcount(states_[s_].traced_mask));
        result.gates = gates_;
      }
      --depth_;
      trying_ = codes_[depth_] + 1;
      if (ok) {
        ++yielded_;
        return result;
      }
      continue;
    }
    trying_ = 0;
  }
}

std::vector<CircuitDescription> enumerate_circuits(std::uint32_t n_out,
                                                   std::size_t s,
                                                   EnumerationOptions opts) {
  CircuitEnumerator en(n_out, s, opts);
  std::vector<CircuitDescription> all;
  while (auto c = en.next()) all.push_back(std::move(*c));
  return all;
}

// --- simulation --------------------------------------------------------------

void apply_h(Vector& amps, int qubit) {
  const std::int64_t b = std::int64_t{1} << qubit;
  for (std::int64_t i = 0; i < amps.size(); ++i) {
    if (i & b) continue;
    Complex lo = amps(i), hi = amps(i | b);
    amps(i) = kInvSqrt2 * (lo + hi);
    amps(i | b) = kInvSqrt2 * (lo - hi);
  }
}

void apply_t(Vector& amps, int qubit) {
  const std::int64_t b = std::int64_t{1} << qubit;
  const Complex phase(kInvSqrt2, kInvSqrt2);  // e^{i pi/4}
  for (std::int64_t i = 0; i < amps.size(); ++i)
    if (i & b) amps(i) *= phase;
}

void apply_cnot(Vector& amps, int control, int target) {
  const std::int64_t bc = std::int64_t{1} << control;
  const std::int64_t bt = std::int64_t{1} << target;
  for (std::int64_t i = 0; i < amps.size(); ++i)
    if ((i & bc) && !(i & bt)) std::swap(amps(i), amps(i | bt));
}

namespace {

void apply_unitary_gates(Vector& amps, const CircuitDescription& c) {
  for (const GateOp& g : c.gates) {
    switch (g.kind) {
      case GateKind::H:
        apply_h(amps, static_cast<int>(g.qubit_a));
        break;
      case GateKind::T:
        apply_t(amps, static_cast<int>(g.qubit_a));
        break;
      case GateKind::Cnot:
        apply_cnot(amps, static_cast<int>(g.qubit_a),
                   static_cast<int>(g.qubit_b));
        break;
      case GateKind::TraceOut:
        break;
    }
  }
}

}  // namespace

DensityMatrix simulate(const CircuitDescription& c, int max_out_qubits) {
  if (c.n_space > kMaxStateQubits)
    throw BudgetError("simulate: circuit space exceeds the statevector budget");
  if (static_cast<int>(c.n_out) > max_out_qubits)
    throw BudgetError("simulate: output exceeds the density matrix budget");
  Vector amps = Vector::Zero(dim_of(static_cast<int>(c.n_space)));
  amps(0) = 1.0;
  apply_unitary_gates(amps, c);
  Statevector full(static_cast<int>(c.n_space), std::move(amps));
  std::set<int> discard;
  for (std::uint32_t q : c.traced_qubits()) discard.insert(static_cast<int>(q));
  return reduced_density(full, discard);
}

Statevector simulate_pure(const CircuitDescription& c) {
  if (!c.unitary_only())
    throw ValidationError("simulate_pure: circuit contains TraceOut gates");
  if (c.n_space > kMaxStateQubits)
    throw BudgetError("simulate_pure: circuit exceeds the statevector budget");
  Vector amps = Vector::Zero(dim_of(static_cast<int>(c.n_space)));
  amps(0) = 1.0;
  apply_unitary_gates(amps, c);
  return Statevector(static_cast<int>(c.n_space), std::move(amps));
}

Statevector apply_described(const Bitstring& desc, std::size_t s,
                            const Statevector& psi) {
  CircuitDescription c = decode(desc, s);
  if (!c.unitary_only())
    throw ValidationError("apply_described: description is not unitary-only");
  if (c.n_space > static_cast<std::uint32_t>(psi.num_qubits()))
    throw DimensionError("apply_described: circuit does not fit the state");
  Vector amps = psi.amplitudes();
  apply_unitary_gates(amps, c);
  return Statevector(psi.num_qubits(), std::move(amps));
}

}  // namespace qprlab
