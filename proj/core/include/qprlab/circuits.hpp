#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qprlab/bitstring.hpp"
#include "qprlab/states.hpp"

namespace qprlab {

// Gate kinds with their 2-bit encoding values.
enum class GateKind : std::uint8_t { H = 0, T = 1, Cnot = 2, TraceOut = 3 };

struct GateOp {
  GateKind kind;
  std::uint32_t qubit_a = 0;
  std::uint32_t qubit_b = 0;  // CNOT target; stored as 0 for other kinds
  std::uint32_t layer = 0;

  bool operator==(const GateOp&) const = default;
};

// {H, T, CNOT, TraceOut} circuit over at most 2s qubits. n_out is the number
// of output qubits (the qubits not traced out), n_space the total register
// size including ancillas.
struct CircuitDescription {
  std::uint32_t n_out = 0;
  std::uint32_t n_space = 0;
  std::vector<GateOp> gates;

  std::size_t size() const { return gates.size(); }
  bool unitary_only() const;
  std::vector<std::uint32_t> traced_qubits() const;

  // Infers the minimal register: n_space = highest touched qubit + 1,
  // n_out = n_space minus the number of TraceOut gates.
  static CircuitDescription from_gates(std::vector<GateOp> gates);
  static CircuitDescription empty(std::uint32_t n_out);

  bool operator==(const CircuitDescription&) const = default;
};

// --- fixed-width encoding (per-gate: kind, qubit_a, qubit_b, layer) ---------

unsigned ceil_log2(std::uint64_t x);
unsigned qubit_field_width(std::size_t s);
unsigned layer_field_width(std::size_t s);
unsigned bits_per_gate(std::size_t s);
// Total encoded length: s * (3*ceil(log2 s) + 4) bits.
std::size_t encoded_bits(std::size_t s);

Bitstring encode(const CircuitDescription& c);

// Inverse of encode. Rejects ill-formed payloads (bad length, CNOT with equal
// qubits, unitary gate after a TraceOut, out-of-range indices, nonzero unused
// fields, non-monotone layers) with a ParseError naming the gate index.
CircuitDescription decode(const Bitstring& bits, std::size_t s);

// --- enumeration -------------------------------------------------------------

struct EnumerationOptions {
  // No TraceOut gates and every gate confined to the output qubits.
  bool unitary_only = false;
};

// Streams every valid size-s circuit with the requested number of output
// qubits, exactly once, in lexicographic order of the encoding. Valid means:
// gate-level rules hold, traced ancillas are exactly the qubits
// [n_out, n_out + #TraceOut), and no gate reaches past that register.
//
// The stream is restartable: constructing with start_index replays forward,
// which costs O(start_index) but lets callers partition a scan by stride.
class CircuitEnumerator {
 public:
  CircuitEnumerator(std::uint32_t n_out, std::size_t s,
                    EnumerationOptions opts = {},
                    std::uint64_t start_index = 0);

  std::optional<CircuitDescription> next();

  // Number of circuits yielded so far (absolute position in the stream).
  std::uint64_t index() const { return yielded_; }

 private:
  struct PrefixState {
    std::uint64_t touched_mask = 0;   // all gates
    std::uint64_t unitary_mask = 0;   // unitary gates only
    std::uint64_t traced_mask = 0;
    std::uint32_t last_layer = 0;
    bool after_traceout = false;
  };

  bool gate_from_code(std::uint64_t code, GateOp& g) const;
  bool admissible(const PrefixState& st, const GateOp& g,
                  std::size_t slot) const;
  PrefixState advance_state(const PrefixState& st, const GateOp& g) const;
  bool leaf_valid() const;

  std::uint32_t n_out_;
  std::size_t s_;
  EnumerationOptions opts_;
  unsigned qw_, lw_, gw_;
  std::uint64_t code_count_;
  std::vector<std::uint64_t> codes_;
  std::vector<GateOp> gates_;
  std::vector<PrefixState> states_;
  std::size_t depth_ = 0;
  std::uint64_t trying_ = 0;
  bool done_ = false;
  bool emitted_empty_ = false;
  std::uint64_t yielded_ = 0;
};

// Convenience: materializes the whole stream (use only at small s).
std::vector<CircuitDescription> enumerate_circuits(std::uint32_t n_out,
                                                   std::size_t s,
                                                   EnumerationOptions opts = {});

// --- simulation --------------------------------------------------------------

// Runs the circuit from |0...0> on n_space qubits: unitary gates in sequence
// order, then the traced qubits are discarded. Output is on n_out qubits.
DensityMatrix simulate(const CircuitDescription& c, int max_out_qubits = 12);

// Unitary-only fast path; output on n_space (= n_out) qubits.
Statevector simulate_pure(const CircuitDescription& c);

// Decodes desc and applies the (unitary-only) circuit to psi. Gates must fit
// inside psi's register; a smaller decoded circuit acts on the low qubits.
Statevector apply_described(const Bitstring& desc, std::size_t s,
                            const Statevector& psi);

// In-place gate kernels on a 2^n amplitude vector (qubit 0 = least
// significant bit of the basis index).
void apply_h(Vector& amps, int qubit);
void apply_t(Vector& amps, int qubit);
void apply_cnot(Vector& amps, int control, int target);

}  // namespace qprlab
