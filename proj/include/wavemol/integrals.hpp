#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wavemol/common.hpp"

namespace wavemol {

/// Rank-4 tensor of two-electron integrals in chemists' notation (ij|kl),
/// stored dense with the full 8-fold permutation symmetry expanded.
class TwoElectronTensor {
 public:
  TwoElectronTensor() = default;
  explicit TwoElectronTensor(int n) : n_(n), data_(std::size_t(n) * n * n * n, 0.0) {}

  int n() const { return n_; }
  double operator()(int i, int j, int k, int l) const {
    return data_[idx(i, j, k, l)];
  }
  /// Store value at (ij|kl) and all 8 symmetry images.
  void set_sym(int i, int j, int k, int l, double v);
  double& raw(int i, int j, int k, int l) { return data_[idx(i, j, k, l)]; }

 private:
  std::size_t idx(int i, int j, int k, int l) const {
    return ((std::size_t(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  std::vector<double> data_;
};

struct MolecularIntegrals {
  int n_spatial = 0;
  int n_electrons = 0;
  int spin_multiplicity_2ms = 0;
  double e_nuclear = 0.0;
  Eigen::MatrixXd h1;        // core Hamiltonian, n x n, symmetric
  TwoElectronTensor h2;      // chemists' (ij|kl)
  std::optional<Eigen::VectorXd> orbital_energies;
  bool canonical = true;     // false if supplied energies are not a Fock diagonal

  void validate() const;
  /// Canonical Fock diagonal for the closed-shell reference occupation;
  /// computed on demand when the file carried no orbital energies.
  Eigen::VectorXd fock_diagonal() const;
  Eigen::VectorXd energies_or_fock() const;
};

/// Parse a standard FCIDUMP stream. Records `value i j k l` (1-based);
/// `value 0 0 0 0` is the constant term, `value i 0 0 0` orbital energies,
/// `value i j 0 0` one-electron integrals.
MolecularIntegrals parse_fcidump(std::istream& in);
MolecularIntegrals load_fcidump(const std::string& path);
/// Serialize with one canonical representative per symmetry class.
void write_fcidump(std::ostream& out, const MolecularIntegrals& ints);

struct ActiveSpace {
  std::set<int> frozen_occupied;
  std::set<int> removed_virtual;
};

/// Frozen-core contraction + removal of virtual orbitals.
MolecularIntegrals apply_active_space(const MolecularIntegrals& ints,
                                      const ActiveSpace& space);

/// Second-quantized Hamiltonian on spin orbitals (interleaved a0,b0,a1,b1,..).
/// two_body stores the coefficient of a+_p a+_q a_r a_s.
struct FermionHamiltonian {
  int n_modes = 0;
  double constant = 0.0;
  Eigen::MatrixXd one_body;
  std::vector<double> two_body;  // dense n^4

  double g(int p, int q, int r, int s) const {
    return two_body[((std::size_t(p) * n_modes + q) * n_modes + r) * n_modes + s];
  }
  double& g_ref(int p, int q, int r, int s) {
    return two_body[((std::size_t(p) * n_modes + q) * n_modes + r) * n_modes + s];
  }
};

FermionHamiltonian to_fermion_hamiltonian(const MolecularIntegrals& ints);

/// A spin-orbital excitation: singles have two indices, doubles four.
/// Spin-orbital indices are interleaved, occupied -> virtual.
struct Excitation {
  std::vector<int> from;  // occupied spin orbitals
  std::vector<int> to;    // virtual spin orbitals
  double mp2_amplitude = 0.0;

  bool operator==(const Excitation& o) const {
    return from == o.from && to == o.to;
  }
};

/// Spin-adapted MP2 doubles amplitudes t_ij^ab = (ia|jb)/(ei+ej-ea-eb) for
/// spatial orbitals of the closed-shell reference; keyed for UCCSD ordering.
struct Mp2Amplitudes {
  // t[(i,j,a,b)] over spatial orbitals, occupied i,j and virtual a,b
  std::vector<std::tuple<int, int, int, int, double>> doubles;
  double spatial(int i, int j, int a, int b) const;
};

Mp2Amplitudes mp2_amplitudes(const MolecularIntegrals& ints);

}  // namespace wavemol
