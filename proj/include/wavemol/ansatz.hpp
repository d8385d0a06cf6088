#pragma once

#include "wavemol/circuit.hpp"
#include "wavemol/integrals.hpp"
#include "wavemol/mapping.hpp"

namespace wavemol {

/// UCCSD excitation list in MP2-descending order (doubles sorted by |t|,
/// then singles, which have zero MP2 amplitude with canonical orbitals),
/// plus the closed-shell reference occupation.
struct UccsdSpec {
  std::vector<Excitation> excitations;
  std::uint64_t reference_occupation = 0;  // interleaved spin-orbital bits
  int n_spin_orbitals = 0;
};

UccsdSpec make_uccsd_spec(const MolecularIntegrals& ints);

/// Reference-state X gates followed by one first-order Trotter factor per
/// excitation; all Pauli terms of one excitation share its parameter.
Circuit build_uccsd(const UccsdSpec& spec, const QubitMapping& mapping);

/// Hardware-efficient ansatz: `layers` repetitions of [RY column + linear
/// CNOT chain] and a final RY column. layers=1 gives the 2-qubit (5-gate)
/// and 4-qubit (11-gate) replication presets.
Circuit build_heuristic(int n_qubits, int layers);

}  // namespace wavemol
