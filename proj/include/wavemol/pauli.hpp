#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "wavemol/common.hpp"

namespace wavemol {

using cplx = std::complex<double>;

/// Pauli string on up to 64 qubits in symplectic (x,z) mask form.
/// Qubit q carries X if x-bit set, Z if z-bit set, Y if both.
struct PauliString {
  int n_qubits = 0;
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;

  PauliString() = default;
  PauliString(int n, std::uint64_t x, std::uint64_t z);
  /// Parse a label like "XIZY" (qubit 0 leftmost).
  static PauliString from_label(const std::string& label);

  bool identity() const { return x_mask == 0 && z_mask == 0; }
  bool operator==(const PauliString& o) const {
    return n_qubits == o.n_qubits && x_mask == o.x_mask && z_mask == o.z_mask;
  }
  char pauli_at(int q) const;
  std::string label() const;
  bool commutes_with(const PauliString& o) const;
  /// True if the two strings are qubit-wise compatible (equal or identity
  /// on every shared qubit).
  bool qubitwise_commutes(const PauliString& o) const;
};

/// (a*b, phase): masks XOR, phase in {1, i, -1, -i}.
std::pair<PauliString, cplx> pauli_multiply(const PauliString& a,
                                            const PauliString& b);

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const {
    std::uint64_t h = split_seed(p.x_mask, p.z_mask);
    return static_cast<std::size_t>(h ^ (static_cast<std::uint64_t>(p.n_qubits) << 56));
  }
};

/// Weighted sum of Pauli strings. Zero-coefficient terms (|c| < 1e-12) are
/// pruned by simplify(), which all algebra routes through.
class PauliSum {
 public:
  static constexpr double kPruneThreshold = 1e-12;

  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}
  static PauliSum identity(int n_qubits, cplx coeff = 1.0);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  const std::unordered_map<PauliString, cplx, PauliStringHash>& terms() const {
    return terms_;
  }

  void add_term(const PauliString& p, cplx coeff);
  PauliSum& operator+=(const PauliSum& o);
  PauliSum& operator*=(cplx s);
  PauliSum operator*(const PauliSum& o) const;
  PauliSum adjoint() const;

  void simplify();
  bool is_hermitian(double tol = 1e-10) const;
  cplx coefficient(const PauliString& p) const;

  /// Dense matrix (qubit 0 = least significant bit). n_qubits <= 12.
  Eigen::MatrixXcd to_dense() const;
  /// Matrix-free application to a statevector.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

  /// One term per line, `coefficient pauli-label`, 17 significant digits,
  /// deterministic (label-sorted) order.
  std::string serialize() const;
  static PauliSum deserialize(std::istream& in);

 private:
  int n_qubits_ = 0;
  std::unordered_map<PauliString, cplx, PauliStringHash> terms_;
};

/// Apply a single Pauli string to a basis state index.
/// Returns (new index, phase).
std::pair<std::uint64_t, cplx> pauli_apply_basis(const PauliString& p,
                                                 std::uint64_t basis);

}  // namespace wavemol
