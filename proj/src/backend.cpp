#include "wavemol/backend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace wavemol {

QuantumState QuantumState::zero_state(int n_qubits) {
  QuantumState s;
  s.n_qubits = n_qubits;
  s.rep = Rep::Statevector;
  s.vec = Eigen::VectorXcd::Zero(1ll << n_qubits);
  s.vec[0] = 1.0;
  return s;
}

Eigen::VectorXd QuantumState::probabilities() const {
  if (rep == Rep::Statevector) return vec.cwiseAbs2();
  return rho.diagonal().real().cwiseMax(0.0);
}

namespace {

void apply_2x2(Eigen::VectorXcd& psi, int q, const Eigen::Matrix2cd& m) {
  const std::uint64_t dim = psi.size();
  const std::uint64_t bit = 1ull << q;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (i & bit) continue;
    const cplx a = psi[i], b = psi[i | bit];
    psi[i] = m(0, 0) * a + m(0, 1) * b;
    psi[i | bit] = m(1, 0) * a + m(1, 1) * b;
  }
}

}  // namespace

void apply_gate_statevector(Eigen::VectorXcd& psi, const Gate& g,
                            double angle) {
  const cplx I(0, 1);
  switch (g.kind) {
    case GateKind::RX: {
      Eigen::Matrix2cd m;
      const double c = std::cos(angle / 2), s = std::sin(angle / 2);
      m << c, -I * s, -I * s, c;
      apply_2x2(psi, g.qubits[0], m);
      break;
    }
    case GateKind::RY: {
      Eigen::Matrix2cd m;
      const double c = std::cos(angle / 2), s = std::sin(angle / 2);
      m << c, -s, s, c;
      apply_2x2(psi, g.qubits[0], m);
      break;
    }
    case GateKind::RZ: {
      Eigen::Matrix2cd m;
      m << std::exp(-I * (angle / 2)), 0, 0, std::exp(I * (angle / 2));
      apply_2x2(psi, g.qubits[0], m);
      break;
    }
    case GateKind::H: {
      Eigen::Matrix2cd m;
      const double r = 1.0 / std::numbers::sqrt2;
      m << r, r, r, -r;
      apply_2x2(psi, g.qubits[0], m);
      break;
    }
    case GateKind::X: {
      Eigen::Matrix2cd m;
      m << 0, 1, 1, 0;
      apply_2x2(psi, g.qubits[0], m);
      break;
    }
    case GateKind::CNOT: {
      const std::uint64_t cb = 1ull << g.qubits[0];
      const std::uint64_t tb = 1ull << g.qubits[1];
      const std::uint64_t dim = psi.size();
      for (std::uint64_t i = 0; i < dim; ++i)
        if ((i & cb) && !(i & tb)) std::swap(psi[i], psi[i | tb]);
      break;
    }
    case GateKind::PauliEvolution: {
      // exp(-i*angle/2 * P) |psi> = cos(a/2)|psi> - i sin(a/2) P|psi>
      const PauliString& p = *g.pauli;
      const double c = std::cos(angle / 2), s = std::sin(angle / 2);
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
      const std::uint64_t dim = psi.size();
      for (std::uint64_t b = 0; b < dim; ++b) {
        if (psi[b] == cplx(0)) continue;
        auto [b2, ph] = pauli_apply_basis(p, b);
        out[b2] += ph * psi[b];
      }
      psi = c * psi - I * s * out;
      break;
    }
  }
}

QuantumState run_statevector(const Circuit& c,
                             const std::vector<double>& params) {
  if (int(params.size()) != c.n_params())
    throw Error("run_statevector: parameter count mismatch");
  QuantumState s = QuantumState::zero_state(c.n_qubits());
  for (const Gate& g : c.gates())
    apply_gate_statevector(s.vec, g, g.angle(params));
  return s;
}

double expectation_exact(const QuantumState& state, const PauliSum& obs) {
  if (obs.n_qubits() != state.n_qubits)
    throw Error("expectation_exact: qubit count mismatch");
  if (!obs.is_hermitian()) throw Error("expectation_exact: non-Hermitian observable");
  cplx acc = 0.0;
  if (state.rep == QuantumState::Rep::Statevector) {
    const Eigen::VectorXcd h_psi = obs.apply(state.vec);
    acc = state.vec.dot(h_psi);  // Eigen dot conjugates the left factor
  } else {
    const std::uint64_t dim = state.rho.rows();
    for (const auto& [p, cff] : obs.terms())
      for (std::uint64_t b = 0; b < dim; ++b) {
        auto [b2, ph] = pauli_apply_basis(p, b);
        acc += cff * ph * state.rho(b, b2);
      }
  }
  if (std::abs(acc.imag()) > 1e-8)
    throw Error("expectation_exact: non-real expectation value");
  return acc.real();
}

std::vector<std::vector<std::pair<PauliString, double>>> group_qubitwise(
    const PauliSum& obs) {
  std::vector<std::pair<PauliString, double>> terms;
  for (const auto& [p, c] : obs.terms()) {
    if (p.identity()) continue;
    terms.emplace_back(p, c.real());
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (std::abs(a.second) != std::abs(b.second))
      return std::abs(a.second) > std::abs(b.second);
    return a.first.label() < b.first.label();
  });
  std::vector<std::vector<std::pair<PauliString, double>>> groups;
  for (const auto& t : terms) {
    bool placed = false;
    for (auto& g : groups) {
      bool ok = true;
      for (const auto& m : g)
        if (!t.first.qubitwise_commutes(m.first)) {
          ok = false;
          break;
        }
      if (ok) {
        g.push_back(t);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({t});
  }
  return groups;
}

std::vector<Gate> measurement_basis_gates(
    const std::vector<std::pair<PauliString, double>>& group, int n_qubits) {
  std::vector<Gate> gates;
  for (int q = 0; q < n_qubits; ++q) {
    char axis = 'I';
    for (const auto& [p, c] : group) {
      const char a = p.pauli_at(q);
      if (a != 'I') {
        axis = a;
        break;
      }
    }
    if (axis == 'X') {
      Gate h;
      h.kind = GateKind::H;
      h.qubits = {q};
      gates.push_back(h);
    } else if (axis == 'Y') {
      // V = H S^dag maps Y to Z; apply S^dag then H
      Gate sdg;
      sdg.kind = GateKind::RZ;
      sdg.qubits = {q};
      sdg.coeff = -std::numbers::pi / 2;
      gates.push_back(sdg);
      Gate h;
      h.kind = GateKind::H;
      h.qubits = {q};
      gates.push_back(h);
    }
  }
  return gates;
}

std::map<std::uint64_t, long> sample_outcomes(const Eigen::VectorXd& probs,
                                              long shots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::uint64_t> dist(probs.data(),
                                                 probs.data() + probs.size());
  std::map<std::uint64_t, long> counts;
  for (long s = 0; s < shots; ++s) ++counts[dist(rng)];
  return counts;
}

ExpectationResult expectation_sampled(const Circuit& c,
                                      const std::vector<double>& params,
                                      const PauliSum& obs, long shots,
                                      std::uint64_t seed) {
  if (shots < 1) throw Error("expectation_sampled: shots must be >= 1");
  if (!obs.is_hermitian())
    throw Error("expectation_sampled: non-Hermitian observable");
  ExpectationResult res;
  res.shots = shots;
  // constant (identity) part is exact
  res.value = obs.coefficient(PauliString(obs.n_qubits(), 0, 0)).real();
  const QuantumState base = run_statevector(c, params);
  const auto groups = group_qubitwise(obs);
  double variance = 0.0;
  std::uint64_t stream = 0;
  for (const auto& group : groups) {
    Eigen::VectorXcd psi = base.vec;
    for (const Gate& g : measurement_basis_gates(group, c.n_qubits()))
      apply_gate_statevector(psi, g, g.coeff);
    const Eigen::VectorXd probs = psi.cwiseAbs2();
    const auto counts =
        sample_outcomes(probs, shots, split_seed(seed, stream++));
    // per-shot group estimator g(b) = sum_P c_P (-1)^{popcount(b & support)}
    double mean = 0.0, mean_sq = 0.0;
    std::vector<double> term_means(group.size(), 0.0);
    for (const auto& [b, n] : counts) {
      double gval = 0.0;
      for (std::size_t t = 0; t < group.size(); ++t) {
        const std::uint64_t support =
            group[t].first.x_mask | group[t].first.z_mask;
        const double e = (std::popcount(b & support) % 2) ? -1.0 : 1.0;
        gval += group[t].second * e;
        term_means[t] += double(n) * e;
      }
      mean += double(n) * gval;
      mean_sq += double(n) * gval * gval;
    }
    mean /= double(shots);
    mean_sq /= double(shots);
    variance += std::max(0.0, mean_sq - mean * mean) / double(shots);
    res.value += mean;
    for (std::size_t t = 0; t < group.size(); ++t)
      res.per_term.emplace_back(group[t].first,
                                term_means[t] / double(shots));
  }
  res.std_error = std::sqrt(variance);
  return res;
}

}  // namespace wavemol
