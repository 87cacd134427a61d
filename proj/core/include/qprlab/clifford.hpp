#pragma once

#include <cstdint>
#include <vector>

#include "qprlab/circuits.hpp"
#include "qprlab/states.hpp"

namespace qprlab {

// Hermitian Pauli in canonical form: sign * prod_q {I,X,Y,Z}_q, packed as
// x/z bitmasks (Y_q means x_q = z_q = 1).
struct PauliRow {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  bool negative = false;

  bool operator==(const PauliRow&) const = default;

  bool commutes_with(const PauliRow& o) const;
  bool identity() const { return x == 0 && z == 0; }
};

// Conjugation action of a Clifford on the Pauli generators: row j is the
// image of X_j, row n+j the image of Z_j.
struct CliffordTableau {
  int n = 0;
  std::vector<PauliRow> x_images;
  std::vector<PauliRow> z_images;

  static CliffordTableau identity(int n);
  bool is_valid() const;  // symplectic commutation relations

  void apply_h(int q);
  void apply_s(int q);      // S = diag(1, i)
  void apply_sdg(int q);
  void apply_cnot(int c, int t);

  bool operator==(const CliffordTableau&) const = default;
};

enum class CliffordGateKind : std::uint8_t { H, S, Sdg, Cnot };

struct CliffordGate {
  CliffordGateKind kind;
  int a = 0;
  int b = 0;  // CNOT target
};

struct CliffordSample {
  CliffordTableau tableau;
  std::vector<CliffordGate> gates;  // circuit realizing the tableau
};

CliffordTableau tableau_from_gates(int n, const std::vector<CliffordGate>& gates);

// Uniformly random Clifford group element (global phase ignored), O(n^2)
// expected time: per qubit, a random anticommuting Pauli pair is swept onto
// (X_j, Z_j) and the inverted sweep gates are emitted.
CliffordSample sample_random_clifford_circuit(int n, std::uint64_t seed);
CliffordTableau sample_random_clifford(int n, std::uint64_t seed);

// Unitary whose conjugation action on the Pauli generators matches the
// tableau. Global phase is pinned by the construction, documented in the
// implementation.
UnitaryMatrix tableau_to_unitary(const CliffordTableau& t);

// Lowers Clifford gates to the {H, T, CNOT} gate set (S = T^2, Sdg = T^6)
// and wraps them as an encodable circuit. Pads with H pairs when the gate
// count is too small for the encoding's qubit field range.
CircuitDescription clifford_gates_to_circuit(const std::vector<CliffordGate>& gates);

// All Clifford tableaus on n <= 2 qubits by brute force over symplectic
// images and sign choices (24 for n=1, 11520 for n=2).
std::vector<CliffordTableau> enumerate_clifford_tableaus(int n);

// All distinct stabilizer states up to global phase (6 / 60 / 1080 for
// n = 1, 2, 3), as the closure of |0..0> under H, S and CNOT.
std::vector<Statevector> enumerate_stabilizer_states(int n);

// sign * X^x Z^z action with Y = iXZ conventions.
Vector apply_pauli(const PauliRow& p, const Vector& amps);

}  // namespace qprlab
