#include "wavemol/noise.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

namespace wavemol {

void NoiseModel::validate() const {
  for (std::size_t q = 0; q < qubits.size(); ++q) {
    const QubitCal& c = qubits[q];
    if (c.t2_us > 2.0 * c.t1_us + 1e-12)
      throw Error("NoiseModel: T2 exceeds 2*T1 on qubit " + std::to_string(q));
    if (c.t1_us <= 0 || c.t2_us <= 0)
      throw Error("NoiseModel: non-positive relaxation time");
    if (c.gate_error < 0 || c.gate_error > 1 || c.readout_error < 0 ||
        c.readout_error > 1)
      throw Error("NoiseModel: probability out of [0,1]");
    if (c.gate_length_ns <= 0) throw Error("NoiseModel: non-positive gate length");
  }
  for (const auto& [pair, c] : couplings) {
    if (c.gate_error < 0 || c.gate_error > 1)
      throw Error("NoiseModel: probability out of [0,1]");
    if (c.gate_length_ns <= 0) throw Error("NoiseModel: non-positive gate length");
  }
}

const NoiseModel::CouplingCal& NoiseModel::coupling(int a, int b) const {
  auto it = couplings.find({a, b});
  if (it == couplings.end()) throw Error("coupling pair not calibrated");
  return it->second;
}

NoiseModel NoiseModel::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("NoiseModel: cannot open " + path);
  nlohmann::json j;
  in >> j;
  NoiseModel m;
  m.name = j.value("name", "");
  const double default_len = j.value("single_qubit_gate_length_ns_default", 35.56);
  for (const auto& q : j.at("qubits")) {
    QubitCal c;
    c.t1_us = q.at("t1_us").get<double>();
    c.t2_us = q.at("t2_us").get<double>();
    c.freq_ghz = q.value("freq_ghz", 0.0);
    c.gate_error = q.at("gate_error").get<double>();
    c.gate_length_ns = q.value("gate_length_ns", default_len);
    c.readout_error = q.at("readout_error").get<double>();
    m.qubits.push_back(c);
  }
  for (const auto& cp : j.at("couplings")) {
    CouplingCal c;
    c.gate_error = cp.at("gate_error").get<double>();
    c.gate_length_ns = cp.at("gate_length_ns").get<double>();
    const auto pair = cp.at("pair");
    m.couplings[{pair.at(0).get<int>(), pair.at(1).get<int>()}] = c;
  }
  m.validate();
  return m;
}

namespace {

// Average gate error of the thermal-relaxation channel (T1, T2, duration):
// 1 - F_avg = (1 - e^{-t/T1})/6 + (1 - e^{-t/T2})/3.
double thermal_avg_error(double t1_us, double t2_us, double t_ns) {
  const double t_us = t_ns * 1e-3;
  return (1.0 - std::exp(-t_us / t1_us)) / 6.0 +
         (1.0 - std::exp(-t_us / t2_us)) / 3.0;
}

}  // namespace

NoiseModel NoiseModel::excess_depolarizing() const {
  NoiseModel m = *this;
  for (auto& q : m.qubits) {
    const double eth = thermal_avg_error(q.t1_us, q.t2_us, q.gate_length_ns);
    // one-qubit depolarizing: avg error = p/2
    q.gate_error = std::max(0.0, (q.gate_error - eth) * 2.0);
  }
  for (auto& [pair, c] : m.couplings) {
    const QubitCal& a = qubits.at(static_cast<std::size_t>(pair[0]));
    const QubitCal& b = qubits.at(static_cast<std::size_t>(pair[1]));
    // Compose the two single-qubit thermal channels via process fidelities
    // (F_pro = 1 - 3/2 avg error for d = 2), then convert the composite back
    // to a two-qubit average error (avg error = 4/5 (1 - F_pro) for d = 4).
    const double fa =
        1.0 - 1.5 * thermal_avg_error(a.t1_us, a.t2_us, c.gate_length_ns);
    const double fb =
        1.0 - 1.5 * thermal_avg_error(b.t1_us, b.t2_us, c.gate_length_ns);
    const double eth = 0.8 * (1.0 - fa * fb);
    // two-qubit depolarizing: avg error = 3/4 p
    c.gate_error = std::max(0.0, (c.gate_error - eth) / 0.75);
  }
  return m;
}

NoiseModel NoiseModel::ideal(int n_qubits) {
  NoiseModel m;
  m.name = "ideal";
  for (int q = 0; q < n_qubits; ++q) {
    QubitCal c;
    c.t1_us = 1e12;
    c.t2_us = 1e12;
    m.qubits.push_back(c);
  }
  for (int a = 0; a < n_qubits; ++a)
    for (int b = 0; b < n_qubits; ++b)
      if (a != b) m.couplings[{a, b}] = CouplingCal{0.0, 1.0};
  return m;
}

namespace {

// rho -> U rho U^dag realized as column action with U, then row action with
// conj(U) (rho U^dag = (conj(U) rho^T)^T).
double conjugate_angle(const Gate& g, double angle) {
  switch (g.kind) {
    case GateKind::RX:
    case GateKind::RZ:
      return -angle;
    case GateKind::PauliEvolution: {
      const int ys = std::popcount(g.pauli->x_mask & g.pauli->z_mask);
      return (ys % 2) ? angle : -angle;
    }
    default:
      return angle;
  }
}

void apply_gate_density(Eigen::MatrixXcd& rho, const Gate& g, double angle) {
  const std::uint64_t dim = rho.rows();
  for (std::uint64_t col = 0; col < dim; ++col) {
    Eigen::VectorXcd v = rho.col(col);
    apply_gate_statevector(v, g, angle);
    rho.col(col) = v;
  }
  rho.transposeInPlace();
  const double ca = conjugate_angle(g, angle);
  for (std::uint64_t col = 0; col < dim; ++col) {
    Eigen::VectorXcd v = rho.col(col);
    apply_gate_statevector(v, g, ca);
    rho.col(col) = v;
  }
  rho.transposeInPlace();
}

void apply_kraus_1q(Eigen::MatrixXcd& rho, int q,
                    const std::vector<Eigen::Matrix2cd>& kraus) {
  const std::uint64_t dim = rho.rows();
  const std::uint64_t bit = 1ull << q;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& k : kraus) {
    Eigen::MatrixXcd t = rho;
    for (std::uint64_t col = 0; col < dim; ++col) {
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const cplx a = t(i, col), b = t(i | bit, col);
        t(i, col) = k(0, 0) * a + k(0, 1) * b;
        t(i | bit, col) = k(1, 0) * a + k(1, 1) * b;
      }
    }
    t.transposeInPlace();
    const Eigen::Matrix2cd kc = k.conjugate();
    for (std::uint64_t col = 0; col < dim; ++col) {
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const cplx a = t(i, col), b = t(i | bit, col);
        t(i, col) = kc(0, 0) * a + kc(0, 1) * b;
        t(i | bit, col) = kc(1, 0) * a + kc(1, 1) * b;
      }
    }
    t.transposeInPlace();
    out += t;
  }
  rho = out;
}

}  // namespace

void apply_depolarizing(Eigen::MatrixXcd& rho, const std::vector<int>& qubits,
                        double prob) {
  if (prob <= 0.0) return;
  // E(rho) = (1-p) rho + p * I_sub/2^k (x) Tr_sub(rho)
  const std::uint64_t dim = rho.rows();
  std::uint64_t sub_mask = 0;
  for (int q : qubits) sub_mask |= 1ull << q;
  const int k = int(qubits.size());
  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t i = 0; i < dim; ++i)
    for (std::uint64_t j = 0; j < dim; ++j) {
      // (I/2^k (x) Tr_sub rho)_{ij}: diagonal in the subsystem bits
      if ((i & sub_mask) != (j & sub_mask)) continue;
      cplx tr = 0.0;
      for (std::uint64_t s = 0; s < dim; ++s) {
        if (s & ~sub_mask) continue;
        // s iterates subsystem configurations embedded in sub_mask bits
        if ((s & sub_mask) != s) continue;
        tr += rho((i & ~sub_mask) | s, (j & ~sub_mask) | s);
      }
      mixed(i, j) = tr / double(1ull << k);
    }
  rho = (1.0 - prob) * rho + prob * mixed;
}

void apply_thermal_relaxation(Eigen::MatrixXcd& rho, int qubit, double t1_us,
                              double t2_us, double duration_ns) {
  const double t = duration_ns * 1e-3;  // us
  const double gamma = 1.0 - std::exp(-t / t1_us);
  // residual pure dephasing so the total off-diagonal factor is exp(-t/T2)
  const double target = std::exp(-t / t2_us);
  const double ad_factor = std::exp(-t / (2.0 * t1_us));
  double dephase_keep = target / ad_factor;
  dephase_keep = std::min(1.0, std::max(0.0, dephase_keep));
  const double lambda = 1.0 - dephase_keep * dephase_keep;

  std::vector<Eigen::Matrix2cd> kraus;
  Eigen::Matrix2cd k0, k1;
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  kraus = {k0, k1};
  apply_kraus_1q(rho, qubit, kraus);
  if (lambda > 0.0) {
    Eigen::Matrix2cd p0, p1;
    p0 << 1, 0, 0, std::sqrt(1.0 - lambda);
    p1 << 0, 0, 0, std::sqrt(lambda);
    kraus = {p0, p1};
    apply_kraus_1q(rho, qubit, kraus);
  }
}

QuantumState run_noisy(const Circuit& c, const std::vector<double>& params,
                       const NoiseModel& noise,
                       const std::vector<int>& assignment) {
  if (int(params.size()) != c.n_params())
    throw Error("run_noisy: parameter count mismatch");
  if (c.n_qubits() > 6) throw Error("density simulation size cap");
  if (int(assignment.size()) != c.n_qubits())
    throw Error("run_noisy: assignment size mismatch");
  for (int d : assignment)
    if (d < 0 || d >= int(noise.qubits.size()))
      throw Error("run_noisy: assignment outside device");
  for (const Gate& g : c.gates())
    if (g.kind == GateKind::PauliEvolution || g.kind == GateKind::X)
      throw Error("run_noisy: circuit not compiled to native gates");

  QuantumState s;
  s.n_qubits = c.n_qubits();
  s.rep = QuantumState::Rep::Density;
  const std::uint64_t dim = 1ull << c.n_qubits();
  s.rho = Eigen::MatrixXcd::Zero(dim, dim);
  s.rho(0, 0) = 1.0;

  for (const Gate& g : c.gates()) {
    apply_gate_density(s.rho, g, g.angle(params));
    if (g.kind == GateKind::CNOT) {
      const int da = assignment[g.qubits[0]], db = assignment[g.qubits[1]];
      const NoiseModel::CouplingCal& cal = noise.coupling(da, db);
      apply_depolarizing(s.rho, g.qubits, cal.gate_error);
      for (int q : g.qubits) {
        const NoiseModel::QubitCal& qc = noise.qubits[assignment[q]];
        apply_thermal_relaxation(s.rho, q, qc.t1_us, qc.t2_us,
                                 cal.gate_length_ns);
      }
    } else {
      const NoiseModel::QubitCal& qc = noise.qubits[assignment[g.qubits[0]]];
      apply_depolarizing(s.rho, g.qubits, qc.gate_error);
      apply_thermal_relaxation(s.rho, g.qubits[0], qc.t1_us, qc.t2_us,
                               qc.gate_length_ns);
    }
  }
  return s;
}

std::map<std::uint64_t, long> sample_with_readout(
    const QuantumState& state, long shots, std::uint64_t seed,
    const NoiseModel& noise, const std::vector<int>& assignment) {
  const Eigen::VectorXd probs = state.probabilities();
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::uint64_t> dist(probs.data(),
                                                 probs.data() + probs.size());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::map<std::uint64_t, long> counts;
  for (long s = 0; s < shots; ++s) {
    std::uint64_t b = dist(rng);
    for (int q = 0; q < state.n_qubits; ++q) {
      const double r = noise.qubits[assignment[q]].readout_error;
      if (r > 0.0 && unif(rng) < r) b ^= 1ull << q;
    }
    ++counts[b];
  }
  return counts;
}

}  // namespace wavemol
