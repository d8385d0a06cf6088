#include "wavemol/ansatz.hpp"

#include <algorithm>
#include <cmath>

namespace wavemol {

namespace {

// Spin-orbital MP2 amplitude <pq||rs> / (e_p + e_q - e_r - e_s) for the
// double p,q (occ) -> r,s (virt), interleaved spin-orbital indices.
double so_amplitude(const MolecularIntegrals& ints,
                    const Eigen::VectorXd& eps, int p, int q, int r, int s) {
  auto spat = [](int so) { return so / 2; };
  auto spin = [](int so) { return so % 2; };
  // antisymmetrized physicists' element <pq||rs> from chemists' (ij|kl)
  double v = 0.0;
  if (spin(p) == spin(r) && spin(q) == spin(s))
    v += ints.h2(spat(p), spat(r), spat(q), spat(s));
  if (spin(p) == spin(s) && spin(q) == spin(r))
    v -= ints.h2(spat(p), spat(s), spat(q), spat(r));
  if (v == 0.0) return 0.0;
  const double den =
      eps[spat(p)] + eps[spat(q)] - eps[spat(r)] - eps[spat(s)];
  if (std::abs(den) < 1e-8) throw Error("MP2 denominator degeneracy");
  return v / den;
}

}  // namespace

UccsdSpec make_uccsd_spec(const MolecularIntegrals& ints) {
  if (ints.n_electrons % 2 != 0)
    throw Error("make_uccsd_spec: closed-shell reference required");
  const int n_so = 2 * ints.n_spatial;
  const int n_occ_so = ints.n_electrons;
  const Eigen::VectorXd eps = ints.energies_or_fock();

  UccsdSpec spec;
  spec.n_spin_orbitals = n_so;
  for (int m = 0; m < n_occ_so; ++m) spec.reference_occupation |= 1ull << m;

  std::vector<Excitation> doubles;
  for (int p = 0; p < n_occ_so; ++p)
    for (int q = p + 1; q < n_occ_so; ++q)
      for (int r = n_occ_so; r < n_so; ++r)
        for (int s = r + 1; s < n_so; ++s) {
          const int sp = p % 2 + q % 2, sv = r % 2 + s % 2;
          if (sp != sv) continue;  // conserve Sz
          Excitation ex;
          ex.from = {p, q};
          ex.to = {r, s};
          ex.mp2_amplitude = so_amplitude(ints, eps, p, q, r, s);
          doubles.push_back(std::move(ex));
        }
  std::stable_sort(doubles.begin(), doubles.end(),
                   [](const Excitation& a, const Excitation& b) {
                     if (std::abs(a.mp2_amplitude) != std::abs(b.mp2_amplitude))
                       return std::abs(a.mp2_amplitude) >
                              std::abs(b.mp2_amplitude);
                     return std::tie(a.from, a.to) < std::tie(b.from, b.to);
                   });
  spec.excitations = std::move(doubles);
  for (int i = 0; i < n_occ_so; ++i)
    for (int a = n_occ_so; a < n_so; ++a) {
      if (i % 2 != a % 2) continue;
      Excitation ex;
      ex.from = {i};
      ex.to = {a};
      spec.excitations.push_back(std::move(ex));
    }
  return spec;
}

Circuit build_uccsd(const UccsdSpec& spec, const QubitMapping& mapping) {
  if (mapping.n_modes() != spec.n_spin_orbitals)
    throw Error("build_uccsd: mapping mode count mismatch");

  // Map every excitation first so the retained-parameter count is known.
  std::vector<std::vector<std::pair<PauliString, double>>> factors;
  for (const Excitation& ex : spec.excitations) {
    PauliSum gen;
    try {
      gen = mapping.map_excitation_generator(ex);
    } catch (const Error&) {
      throw Error("excitation breaks symmetry sector");
    }
    std::vector<std::pair<PauliString, double>> terms;
    for (const auto& [p, c] : gen.terms()) {
      if (std::abs(c.real()) > 1e-10)
        throw Error("build_uccsd: generator is not anti-Hermitian");
      terms.emplace_back(p, c.imag());
    }
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
      return a.first.label() < b.first.label();
    });
    if (!terms.empty()) factors.push_back(std::move(terms));
  }

  Circuit c(mapping.n_qubits(), int(factors.size()));
  const std::uint64_t ref = mapping.reference_bits(spec.reference_occupation);
  for (int q = 0; q < c.n_qubits(); ++q)
    if ((ref >> q) & 1) {
      Gate x;
      x.kind = GateKind::X;
      x.qubits = {q};
      c.append(x);
    }
  for (std::size_t k = 0; k < factors.size(); ++k)
    for (const auto& [p, gamma] : factors[k]) {
      // exp(theta * i*gamma*P) = exp(-i * (-2*gamma*theta)/2 * P)
      Gate g;
      g.kind = GateKind::PauliEvolution;
      for (int q = 0; q < p.n_qubits; ++q)
        if (p.pauli_at(q) != 'I') g.qubits.push_back(q);
      if (g.qubits.empty()) g.qubits.push_back(0);
      g.param_index = int(k);
      g.coeff = -2.0 * gamma;
      g.pauli = p;
      c.append(std::move(g));
    }
  return c;
}

Circuit build_heuristic(int n_qubits, int layers) {
  if (layers < 1) throw Error("build_heuristic: layers must be >= 1");
  if (n_qubits < 1) throw Error("build_heuristic: need at least one qubit");
  const int n_params = n_qubits * (layers + 1);
  Circuit c(n_qubits, n_params);
  int p = 0;
  auto ry_column = [&]() {
    for (int q = 0; q < n_qubits; ++q) {
      Gate g;
      g.kind = GateKind::RY;
      g.qubits = {q};
      g.param_index = p++;
      c.append(std::move(g));
    }
  };
  for (int l = 0; l < layers; ++l) {
    ry_column();
    for (int q = 0; q + 1 < n_qubits; ++q) {
      Gate cx;
      cx.kind = GateKind::CNOT;
      cx.qubits = {q, q + 1};
      c.append(std::move(cx));
    }
  }
  ry_column();
  return c;
}

}  // namespace wavemol
