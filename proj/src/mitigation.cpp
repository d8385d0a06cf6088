#include "wavemol/mitigation.hpp"

#include <bit>
#include <cmath>

namespace wavemol {

ReadoutCalibration ReadoutCalibration::from_noise_model(
    const NoiseModel& noise, const std::vector<int>& assignment) {
  ReadoutCalibration cal;
  for (int d : assignment) {
    const double p = noise.qubits.at(d).readout_error;
    Eigen::Matrix2d m;
    m << 1.0 - p, p, p, 1.0 - p;
    cal.confusion.push_back(m);
  }
  return cal;
}

std::map<std::uint64_t, double> mitigate_readout(
    const std::map<std::uint64_t, long>& counts,
    const ReadoutCalibration& cal) {
  const int n = cal.n_qubits();
  const std::uint64_t dim = 1ull << n;
  long total = 0;
  for (const auto& [b, c] : counts) {
    if (b >= dim) throw Error("mitigate_readout: bitstring exceeds width");
    total += c;
  }
  if (total == 0) throw Error("mitigate_readout: empty counts");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
  for (const auto& [b, c] : counts) p[b] = double(c) / double(total);
  for (int q = 0; q < n; ++q) {
    const Eigen::Matrix2d& m = cal.confusion[q];
    if (std::abs(m.determinant()) < 1e-12)
      throw Error("non-invertible calibration");
    const Eigen::Matrix2d inv = m.inverse();
    const std::uint64_t bit = 1ull << q;
    for (std::uint64_t i = 0; i < dim; ++i) {
      if (i & bit) continue;
      const double a = p[i], b = p[i | bit];
      p[i] = inv(0, 0) * a + inv(0, 1) * b;
      p[i | bit] = inv(1, 0) * a + inv(1, 1) * b;
    }
  }
  std::map<std::uint64_t, double> out;
  for (std::uint64_t i = 0; i < dim; ++i)
    if (p[i] != 0.0) out[i] = p[i];
  return out;
}

double quasi_expectation(const std::map<std::uint64_t, double>& dist,
                         std::uint64_t z_support) {
  double acc = 0.0;
  for (const auto& [b, q] : dist)
    acc += q * ((std::popcount(b & z_support) % 2) ? -1.0 : 1.0);
  return acc;
}

ZneResult zne_extrapolate(const std::vector<ZnePoint>& series) {
  if (series.size() < 2) throw Error("zne_extrapolate: need at least 2 folds");
  for (const ZnePoint& p : series)
    if (p.fold < 1 || p.fold % 2 == 0)
      throw Error("zne_extrapolate: fold factors must be odd positive");
  for (std::size_t i = 0; i < series.size(); ++i)
    for (std::size_t j = i + 1; j < series.size(); ++j)
      if (series[i].fold == series[j].fold)
        throw Error("zne_extrapolate: duplicate fold factors");

  const int n = int(series.size());
  bool all_positive = true;
  for (const ZnePoint& p : series)
    if (p.std_error <= 0.0) all_positive = false;
  // weighted LS of E = b0 + b1 * f, weights 1/sigma^2 (uniform fallback)
  double sw = 0, swx = 0, swxx = 0, swy = 0, swxy = 0;
  for (const ZnePoint& p : series) {
    const double w =
        all_positive ? 1.0 / (p.std_error * p.std_error) : 1.0;
    sw += w;
    swx += w * p.fold;
    swxx += w * double(p.fold) * p.fold;
    swy += w * p.energy;
    swxy += w * p.fold * p.energy;
  }
  const double det = sw * swxx - swx * swx;
  if (std::abs(det) < 1e-30) throw Error("zne_extrapolate: singular fit");
  ZneResult r;
  r.energy = (swxx * swy - swx * swxy) / det;
  r.slope = (sw * swxy - swx * swy) / det;
  double chi2 = 0.0;
  for (const ZnePoint& p : series) {
    const double w = all_positive ? 1.0 / (p.std_error * p.std_error) : 1.0;
    const double res = p.energy - (r.energy + r.slope * p.fold);
    chi2 += w * res * res;
  }
  r.chi2_reduced = n > 2 ? chi2 / double(n - 2) : 1.0;
  double var_b0 = swxx / det;  // (X^T W X)^{-1}_{00}
  if (!all_positive) {
    // uniform weights carry no scale: use the residual variance estimate
    var_b0 *= (n > 2 ? r.chi2_reduced : 0.0);
  } else {
    var_b0 *= std::max(1.0, r.chi2_reduced);
  }
  r.ci95 = 1.96 * std::sqrt(std::max(0.0, var_b0));
  return r;
}

ExpectationResult expectation_noisy_mitigated(
    const Circuit& native, const std::vector<double>& params,
    const PauliSum& obs, const NoiseModel& noise,
    const std::vector<int>& assignment, long shots, std::uint64_t seed,
    bool mitigate) {
  if (shots < 1) throw Error("expectation_noisy_mitigated: shots must be >= 1");
  ExpectationResult res;
  res.shots = shots;
  res.value = obs.coefficient(PauliString(obs.n_qubits(), 0, 0)).real();
  const ReadoutCalibration cal =
      ReadoutCalibration::from_noise_model(noise, assignment);
  const auto groups = group_qubitwise(obs);
  double variance = 0.0;
  std::uint64_t stream = 0;
  for (const auto& group : groups) {
    Circuit rotated = native;
    for (const Gate& g : measurement_basis_gates(group, native.n_qubits()))
      rotated.append(g);
    const QuantumState rho = run_noisy(rotated, params, noise, assignment);
    const auto counts = sample_with_readout(
        rho, shots, split_seed(seed, stream++), noise, assignment);
    std::map<std::uint64_t, double> dist;
    if (mitigate) {
      dist = mitigate_readout(counts, cal);
    } else {
      for (const auto& [b, c] : counts) dist[b] = double(c) / double(shots);
    }
    double gmean = 0.0, graw_sq = 0.0;
    for (const auto& [p, c] : group) {
      const std::uint64_t support = p.x_mask | p.z_mask;
      const double e = quasi_expectation(dist, support);
      res.per_term.emplace_back(p, e);
      gmean += c * e;
    }
    res.value += gmean;
    // variance approximated from the unmitigated sample spread
    double rmean = 0.0;
    for (const auto& [b, c] : counts) {
      double gval = 0.0;
      for (const auto& [p, cc] : group) {
        const std::uint64_t support = p.x_mask | p.z_mask;
        gval += cc * ((std::popcount(b & support) % 2) ? -1.0 : 1.0);
      }
      rmean += double(c) * gval;
      graw_sq += double(c) * gval * gval;
    }
    rmean /= double(shots);
    graw_sq /= double(shots);
    variance += std::max(0.0, graw_sq - rmean * rmean) / double(shots);
  }
  res.std_error = std::sqrt(variance);
  return res;
}

MitigatedPoint run_mitigated_vqe_point(
    const PauliSum& hamiltonian, const Circuit& native,
    const std::vector<double>& params, const NoiseModel& noise,
    const std::vector<int>& assignment, const std::vector<int>& folds,
    long shots, int repetitions, std::uint64_t seed) {
  if (repetitions < 2)
    throw Error("run_mitigated_vqe_point: need at least 2 repetitions");
  MitigatedPoint out;
  std::uint64_t stream = 0;
  for (int f : folds) {
    const Circuit folded = fold_cnots(native, f);
    double sum = 0.0, sum_sq = 0.0;
    std::vector<double> reps;
    for (int r = 0; r < repetitions; ++r) {
      const ExpectationResult e = expectation_noisy_mitigated(
          folded, params, hamiltonian, noise, assignment, shots,
          split_seed(seed, stream++), true);
      sum += e.value;
      sum_sq += e.value * e.value;
      reps.push_back(e.value);
    }
    out.repetition_energies.push_back(std::move(reps));
    ZnePoint p;
    p.fold = f;
    p.repetitions = repetitions;
    p.energy = sum / repetitions;
    const double var =
        std::max(0.0, sum_sq / repetitions - p.energy * p.energy);
    p.std_error = std::sqrt(var / std::max(1, repetitions - 1));
    out.series.push_back(p);
    if (f == 1) out.raw = p.energy;
  }
  const ZneResult z = zne_extrapolate(out.series);
  out.mitigated = z.energy;
  out.ci95 = z.ci95;
  return out;
}

}  // namespace wavemol
