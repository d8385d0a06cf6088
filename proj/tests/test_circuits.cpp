#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "wavemol/ansatz.hpp"
#include "wavemol/backend.hpp"
#include "wavemol/circuit.hpp"
#include "wavemol/solver.hpp"

using namespace wavemol;

#ifndef FIXTURES_DIR
#define FIXTURES_DIR "fixtures"
#endif

namespace {

const std::string kH2Fixture =
    std::string(FIXTURES_DIR) + "/h2_sto3g/h2_r0.735.fcidump";

// maximum |U - e^{i phi} V| over a best-fit global phase
double distance_up_to_phase(const Eigen::MatrixXcd& u,
                            const Eigen::MatrixXcd& v) {
  cplx phase(1, 0);
  double best = 0.0;
  for (int c = 0; c < u.cols() && best == 0.0; ++c)
    for (int r = 0; r < u.rows(); ++r)
      if (std::abs(v(r, c)) > 1e-6) {
        phase = u(r, c) / v(r, c);
        phase /= std::abs(phase);
        best = 1.0;
        break;
      }
  return (u - phase * v).cwiseAbs().maxCoeff();
}

Gate rotation(GateKind k, int q, int param) {
  Gate g;
  g.kind = k;
  g.qubits = {q};
  g.param_index = param;
  return g;
}

Gate evolution(const std::string& label, int param, double coeff) {
  Gate g;
  g.kind = GateKind::PauliEvolution;
  g.pauli = PauliString::from_label(label);
  for (int q = 0; q < g.pauli->n_qubits; ++q)
    if (g.pauli->pauli_at(q) != 'I') g.qubits.push_back(q);
  if (g.qubits.empty()) g.qubits.push_back(0);
  g.param_index = param;
  g.coeff = coeff;
  return g;
}

}  // namespace

TEST_CASE("gate validation") {
  Circuit c(2, 1);
  Gate cx;
  cx.kind = GateKind::CNOT;
  cx.qubits = {0, 0};
  CHECK_THROWS_AS(c.append(cx), Error);
  cx.qubits = {0, 2};
  CHECK_THROWS_AS(c.append(cx), Error);
  cx.qubits = {0, 1};
  c.append(cx);
  CHECK(c.count_kind(GateKind::CNOT) == 1);
  CHECK_THROWS_AS(c.append(rotation(GateKind::RX, 0, 3)), Error);  // bad param
  Gate pe;
  pe.kind = GateKind::PauliEvolution;
  pe.qubits = {0};
  CHECK_THROWS_AS(c.append(pe), Error);  // missing generator
}

TEST_CASE("serialize round trip") {
  Circuit c(3, 2);
  Gate x;
  x.kind = GateKind::X;
  x.qubits = {1};
  c.append(x);
  c.append(rotation(GateKind::RY, 0, 1));
  Gate lit = rotation(GateKind::RZ, 2, -1);
  lit.param_index = -1;
  lit.coeff = 0.75;
  c.append(lit);
  c.append(evolution("XYI", 0, -1.5));
  std::istringstream in(c.serialize());
  const Circuit back = Circuit::deserialize(in);
  CHECK(back.serialize() == c.serialize());
  CHECK(back.n_qubits() == 3);
  CHECK(back.n_params() == 2);
  const std::vector<double> th = {0.3, -0.9};
  CHECK(distance_up_to_phase(back.unitary(th), c.unitary(th)) < 1e-14);
}

TEST_CASE("compile_native: ZZ evolution becomes CNOT RZ CNOT") {
  Circuit c(2, 1);
  c.append(evolution("ZZ", 0, 1.0));
  const Circuit native = compile_native(c);
  REQUIRE(native.gates().size() == 3);
  CHECK(native.gates()[0].kind == GateKind::CNOT);
  CHECK(native.gates()[1].kind == GateKind::RZ);
  CHECK(native.gates()[1].qubits[0] == 1);
  CHECK(native.gates()[1].param_index == 0);
  CHECK(native.gates()[2].kind == GateKind::CNOT);
  for (double theta : {0.0, 0.4, -1.3}) {
    const std::vector<double> th = {theta};
    CHECK(distance_up_to_phase(native.unitary(th), c.unitary(th)) < 1e-12);
  }
}

TEST_CASE("compile_native: random 3-qubit circuits match up to global phase") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_int_distribution<int> pick(0, 3);
  const char* labels[] = {"XYZ", "IYX", "ZIY", "XXI", "IIZ", "YYY"};
  for (int trial = 0; trial < 12; ++trial) {
    Circuit c(3, 2);
    for (int g = 0; g < 6; ++g) {
      switch (pick(rng)) {
        case 0: c.append(rotation(GateKind::RX, pick(rng) % 3, 0)); break;
        case 1: c.append(rotation(GateKind::RY, pick(rng) % 3, 1)); break;
        case 2: {
          Gate x;
          x.kind = GateKind::X;
          x.qubits = {pick(rng) % 3};
          c.append(x);
          break;
        }
        default:
          c.append(evolution(labels[std::uniform_int_distribution<int>(0, 5)(rng)],
                             pick(rng) % 2, u(rng)));
      }
    }
    const Circuit native = compile_native(c);
    CHECK(native.count_kind(GateKind::PauliEvolution) == 0);
    CHECK(native.count_kind(GateKind::X) == 0);
    const std::vector<double> th = {u(rng), u(rng)};
    CHECK(distance_up_to_phase(native.unitary(th), c.unitary(th)) < 1e-10);
  }
}

TEST_CASE("fold_cnots: counts and unitary invariance") {
  const Circuit preset = build_heuristic(4, 1);
  CHECK(preset.gates().size() == 11);
  CHECK(preset.count_kind(GateKind::CNOT) == 3);
  CHECK(preset.n_params() == 8);

  const Circuit same = fold_cnots(preset, 1);
  CHECK(same.count_kind(GateKind::CNOT) == 3);
  const Circuit f5 = fold_cnots(preset, 5);
  CHECK(f5.count_kind(GateKind::CNOT) == 15);
  std::vector<double> th(8);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : th) v = u(rng);
  CHECK(distance_up_to_phase(f5.unitary(th), preset.unitary(th)) < 1e-12);
  CHECK_THROWS_AS(fold_cnots(preset, 2), Error);
  CHECK_THROWS_AS(fold_cnots(preset, 0), Error);
}

TEST_CASE("heuristic presets") {
  const Circuit two = build_heuristic(2, 1);
  CHECK(two.gates().size() == 5);
  CHECK(two.n_params() == 4);
  CHECK_THROWS_AS(build_heuristic(2, 0), Error);
  CHECK_THROWS_AS(build_heuristic(0, 1), Error);
  // zero parameters leave |00> unchanged
  const QuantumState s = run_statevector(two, std::vector<double>(4, 0.0));
  CHECK(std::abs(s.vec[0] - cplx(1, 0)) < 1e-14);
}

TEST_CASE("UCCSD on H2: MP2 ordering, HF at zero, FCI at the optimum") {
  const MolecularIntegrals ints = load_fcidump(kH2Fixture);
  const UccsdSpec spec = make_uccsd_spec(ints);
  // doubles precede singles; the lone double excites both electrons
  REQUIRE(!spec.excitations.empty());
  CHECK(spec.excitations[0].from == std::vector<int>{0, 1});
  CHECK(spec.excitations[0].to == std::vector<int>{2, 3});
  CHECK(std::abs(spec.excitations[0].mp2_amplitude) > 1e-3);
  for (std::size_t i = 1; i < spec.excitations.size(); ++i)
    CHECK(spec.excitations[i].mp2_amplitude == 0.0);
  CHECK(spec.reference_occupation == 0b0011);

  const QubitMapping mapping = QubitMapping::parity_tapered(4, 2, 0);
  const Circuit ansatz = build_uccsd(spec, mapping);
  CHECK(ansatz.n_qubits() == 2);
  // theta = 0 must reproduce the Hartree-Fock determinant energy
  const PauliSum h = mapping.map_hamiltonian(to_fermion_hamiltonian(ints));
  const QuantumState hf =
      run_statevector(ansatz, std::vector<double>(ansatz.n_params(), 0.0));
  CHECK(std::abs(expectation_exact(hf, h) - (-1.116998996752995)) < 1e-10);

  // the exponential spans the 2-determinant FCI space: optimum reaches FCI
  VqeProblem prob;
  prob.hamiltonian = h;
  prob.ansatz = ansatz;
  prob.initial.assign(ansatz.n_params(), 0.0);
  prob.initial[0] = spec.excitations[0].mp2_amplitude;
  const VqeResult res = vqe_minimize(prob);
  const double fci = fci_solve(ints).ground_energy();
  CHECK(std::abs(res.energy - fci) < 1e-8);
}

TEST_CASE("UCCSD parameter count follows the excitation combinatorics") {
  const MolecularIntegrals ints = load_fcidump(kH2Fixture);
  const UccsdSpec spec = make_uccsd_spec(ints);
  // H2: 1 spin-conserving double + 2 spin-conserving singles
  CHECK(spec.excitations.size() == 3);
  const Circuit jw = build_uccsd(spec, QubitMapping::jordan_wigner(4));
  CHECK(jw.n_params() == 3);
  CHECK(jw.count_kind(GateKind::X) == 2);  // reference occupation
}
