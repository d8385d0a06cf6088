#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wavemol/integrals.hpp"
#include "wavemol/pauli.hpp"

namespace wavemol {

struct TaperingInfo {
  std::vector<PauliString> generators;   // Z-type symmetry generators
  std::vector<int> removed_positions;    // qubit positions substituted away
  std::vector<int> sector_eigenvalues;   // +1/-1 per generator
  int n_modes = 0;
};

enum class MappingKind { JordanWigner, Parity };

/// Fermion-to-qubit mapping with optional two-qubit Z2 tapering (parity only).
/// Spin-orbital inputs use the interleaved convention (a0,b0,a1,b1,...);
/// the parity route permutes to blocked order (all alpha, then all beta)
/// internally, which the two-qubit reduction requires.
class QubitMapping {
 public:
  static QubitMapping jordan_wigner(int n_modes);
  static QubitMapping parity(int n_modes);
  static QubitMapping parity_tapered(int n_modes, int n_electrons, int two_ms);

  MappingKind kind() const { return kind_; }
  int n_modes() const { return n_modes_; }
  int n_qubits() const;
  const std::optional<TaperingInfo>& taper() const { return taper_; }

  /// Pauli operator for a single mode operator (interleaved index).
  PauliSum mode_operator(bool dagger, int mode) const;
  /// Map a full second-quantized Hamiltonian.
  PauliSum map_hamiltonian(const FermionHamiltonian& h) const;
  /// Anti-Hermitian generator T - T^dag of a (spin-conserving) excitation.
  PauliSum map_excitation_generator(const Excitation& ex) const;
  /// Computational-basis bitstring preparing an occupation-number state
  /// (interleaved occupation bits in) under this mapping.
  std::uint64_t reference_bits(std::uint64_t interleaved_occupation) const;

  /// Apply the Z2 substitution to an operator expressed on the untapered
  /// parity qubits. Errors if a term anticommutes with a generator.
  PauliSum apply_taper(const PauliSum& h) const;

 private:
  QubitMapping(MappingKind k, int n_modes) : kind_(k), n_modes_(n_modes) {}
  int blocked_position(int interleaved_mode) const;
  PauliSum map_product(const std::vector<std::pair<bool, int>>& ops) const;

  MappingKind kind_;
  int n_modes_;
  std::optional<TaperingInfo> taper_;
};

/// Convenience entry points matching the operation surface.
PauliSum jordan_wigner(const FermionHamiltonian& h);
PauliSum parity_map(const FermionHamiltonian& h);
/// Returns the tapered Hamiltonian plus the tapering metadata.
std::pair<PauliSum, TaperingInfo> taper_z2(const PauliSum& parity_h,
                                           int n_electrons, int two_ms);

/// Conjugate an operator by X on the qubits selected by `mask` (an energy-
/// preserving change of computational frame). With mask = reference_bits(occ)
/// the reference determinant becomes |0...0>, the frame used for noisy runs
/// so that relaxation toward |0> does not drain the dominant basis state.
PauliSum x_conjugate(const PauliSum& op, std::uint64_t mask);

}  // namespace wavemol
