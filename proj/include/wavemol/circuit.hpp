#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavemol/pauli.hpp"

namespace wavemol {

enum class GateKind { RX, RY, RZ, H, X, CNOT, PauliEvolution };

/// One circuit element. Parameterized gates bind either a literal angle
/// (param_index < 0) or a symbolic parameter: angle = coeff * theta[param_index]
/// (coeff carries per-gate multipliers for shared UCCSD parameters).
/// PauliEvolution applies exp(-i * angle/2 * P).
struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  int param_index = -1;
  double coeff = 1.0;  // literal angle when param_index < 0
  std::optional<PauliString> pauli;

  double angle(const std::vector<double>& params) const {
    return param_index < 0 ? coeff : coeff * params[param_index];
  }
  bool parameterized() const { return param_index >= 0; }
};

class Circuit {
 public:
  Circuit() = default;
  Circuit(int n_qubits, int n_params) : n_qubits_(n_qubits), n_params_(n_params) {}

  int n_qubits() const { return n_qubits_; }
  int n_params() const { return n_params_; }
  const std::vector<Gate>& gates() const { return gates_; }

  void append(Gate g);
  int count_kind(GateKind k) const;

  /// Dense unitary (tests; <= 10 qubits).
  Eigen::MatrixXcd unitary(const std::vector<double>& params) const;

  /// One gate per line `KIND q[,q2] [p<idx>*coeff | literal]`.
  std::string serialize() const;
  static Circuit deserialize(std::istream& in);

 private:
  int n_qubits_ = 0;
  int n_params_ = 0;
  std::vector<Gate> gates_;
};

/// Lower PauliEvolution gates to {RX, RY, RZ, H, CNOT} via basis changes and
/// a CNOT staircase; other gates pass through (X lowered too).
Circuit compile_native(const Circuit& c);

/// Replace every CNOT by `factor` consecutive CNOTs (factor odd).
Circuit fold_cnots(const Circuit& c, int factor);

}  // namespace wavemol
