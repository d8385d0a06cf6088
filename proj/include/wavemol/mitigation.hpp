#pragma once

#include "wavemol/noise.hpp"

namespace wavemol {

/// Per-qubit 2x2 confusion matrices (columns: true state, rows: observed).
struct ReadoutCalibration {
  std::vector<Eigen::Matrix2d> confusion;

  /// Analytic calibration from the noise model's symmetric flip rates for
  /// the assigned device qubits.
  static ReadoutCalibration from_noise_model(const NoiseModel& noise,
                                             const std::vector<int>& assignment);
  int n_qubits() const { return int(confusion.size()); }
};

/// Tensor-product inverse of the confusion matrices applied to the empirical
/// distribution; entries of the returned quasi-distribution may be negative.
std::map<std::uint64_t, double> mitigate_readout(
    const std::map<std::uint64_t, long>& counts, const ReadoutCalibration& cal);

/// <P> of a Z-diagonal Pauli support from a (quasi-)distribution.
double quasi_expectation(const std::map<std::uint64_t, double>& dist,
                         std::uint64_t z_support);

struct ZnePoint {
  int fold = 1;
  double energy = 0.0;
  double std_error = 0.0;
  int repetitions = 0;
};

struct ZneResult {
  double energy = 0.0;    // intercept at fold 0
  double ci95 = 0.0;
  double slope = 0.0;
  double chi2_reduced = 0.0;
};

/// Weighted least-squares line over fold factors; intercept at zero folds.
/// ci95 combines the intercept variance with the regression residuals.
ZneResult zne_extrapolate(const std::vector<ZnePoint>& series);

/// Readout-mitigated sampled expectation on the noisy backend. The circuit
/// must be native-compiled; grouping and basis rotations as in the sampled
/// backend path.
ExpectationResult expectation_noisy_mitigated(
    const Circuit& native, const std::vector<double>& params,
    const PauliSum& obs, const NoiseModel& noise,
    const std::vector<int>& assignment, long shots, std::uint64_t seed,
    bool mitigate = true);

struct MitigatedPoint {
  double raw = 0.0;        // fold-1 mean (readout-mitigated)
  double mitigated = 0.0;  // ZNE intercept
  double ci95 = 0.0;
  std::vector<ZnePoint> series;
  std::vector<std::vector<double>> repetition_energies;  // per fold
};

/// Fig.-5-style evaluation at fixed optimal parameters: per fold factor,
/// `repetitions` seeded readout-mitigated evaluations; the fold means feed
/// the linear extrapolation.
MitigatedPoint run_mitigated_vqe_point(
    const PauliSum& hamiltonian, const Circuit& native,
    const std::vector<double>& params, const NoiseModel& noise,
    const std::vector<int>& assignment, const std::vector<int>& folds,
    long shots, int repetitions, std::uint64_t seed);

}  // namespace wavemol
