#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wavemol/circuit.hpp"
#include "wavemol/pauli.hpp"

namespace wavemol {

/// Pure state or density matrix, tagged by representation.
struct QuantumState {
  enum class Rep { Statevector, Density };
  int n_qubits = 0;
  Rep rep = Rep::Statevector;
  Eigen::VectorXcd vec;
  Eigen::MatrixXcd rho;

  static QuantumState zero_state(int n_qubits);
  /// Probability of each computational basis outcome.
  Eigen::VectorXd probabilities() const;
};

/// Low-level gate action on an amplitude vector (shared by the simulators
/// and Circuit::unitary). PauliEvolution applies exp(-i*angle/2*P) directly.
void apply_gate_statevector(Eigen::VectorXcd& psi, const Gate& g, double angle);

QuantumState run_statevector(const Circuit& c, const std::vector<double>& params);

/// <psi|obs|psi> or Tr(rho obs); errors on non-Hermitian observables.
double expectation_exact(const QuantumState& state, const PauliSum& obs);

struct ExpectationResult {
  double value = 0.0;
  double std_error = 0.0;
  long shots = 0;
  std::vector<std::pair<PauliString, double>> per_term;
};

/// Greedy qubit-wise-commuting grouping, heaviest coefficients first.
std::vector<std::vector<std::pair<PauliString, double>>> group_qubitwise(
    const PauliSum& obs);

/// Gates rotating every X/Y in the group onto Z for computational-basis
/// measurement (native gates only).
std::vector<Gate> measurement_basis_gates(
    const std::vector<std::pair<PauliString, double>>& group, int n_qubits);

/// Shot-sampled estimate on the exact-statevector backend. Deterministic for
/// a fixed seed; variance summed over the per-group sample estimators.
ExpectationResult expectation_sampled(const Circuit& c,
                                      const std::vector<double>& params,
                                      const PauliSum& obs, long shots,
                                      std::uint64_t seed);

/// Multinomial sampling of basis outcomes from a probability vector.
std::map<std::uint64_t, long> sample_outcomes(const Eigen::VectorXd& probs,
                                              long shots, std::uint64_t seed);

}  // namespace wavemol
