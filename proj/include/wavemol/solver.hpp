#pragma once

#include <functional>
#include <optional>

#include "wavemol/backend.hpp"
#include "wavemol/circuit.hpp"
#include "wavemol/integrals.hpp"
#include "wavemol/noise.hpp"
#include "wavemol/pauli.hpp"

namespace wavemol {

/// Exact diagonalization in the fixed-(N_alpha, N_beta) determinant basis.
struct FciResult {
  Eigen::VectorXd energies;            // lowest k
  Eigen::MatrixXd vectors;             // columns, determinant basis
  std::vector<std::uint64_t> determinants;  // interleaved occupation masks
  double ground_energy() const { return energies[0]; }
};

FciResult fci_solve(const MolecularIntegrals& ints, int k = 1);

/// Minimum eigenvalue of a Hermitian PauliSum (dense <= 10 qubits, Lanczos
/// up to 14).
double qubit_ground_energy(const PauliSum& h);

enum class BackendKind { Exact, Sampled, Noisy };

struct VqeProblem {
  PauliSum hamiltonian;
  Circuit ansatz;
  std::vector<double> initial;
  BackendKind backend = BackendKind::Exact;
  long shots = 10000;
  std::uint64_t seed = 0;
  const NoiseModel* noise = nullptr;       // Noisy backend
  std::vector<int> assignment;             // Noisy backend
  std::optional<std::vector<double>> lower_bounds, upper_bounds;
  int max_iterations = 500;
  double tolerance = 1e-9;
};

struct VqeResult {
  double energy = 0.0;
  std::vector<double> parameters;
  std::vector<double> trace;  // energy per accepted iteration
  bool converged = false;
  int iterations = 0;
};

/// Bounded limited-memory quasi-Newton minimization of E(theta).
/// Parameter-shift gradients for single-gate rotation parameters, central
/// finite differences otherwise. Deterministic for a fixed seed.
VqeResult vqe_minimize(const VqeProblem& p);

/// Best of `n_starts` runs from perturbed initial points.
VqeResult vqe_multistart(const VqeProblem& p, int n_starts,
                         std::uint64_t seed);

/// Generic bounded L-BFGS used by the VQE driver (exposed for unit tests).
struct MinimizeResult {
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> trace;
  bool converged = false;
  int iterations = 0;
};
MinimizeResult lbfgsb_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    const std::function<std::vector<double>(const std::vector<double>&)>& grad,
    std::vector<double> x0, const std::optional<std::vector<double>>& lo,
    const std::optional<std::vector<double>>& hi, int max_iterations,
    double tolerance);

}  // namespace wavemol
