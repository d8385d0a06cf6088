#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wavemol/ansatz.hpp"
#include "wavemol/solver.hpp"

using namespace wavemol;

#ifndef FIXTURES_DIR
#define FIXTURES_DIR "fixtures"
#endif

namespace {
const std::string kH2Fixture =
    std::string(FIXTURES_DIR) + "/h2_sto3g/h2_r0.735.fcidump";
const std::string kLihFixture =
    std::string(FIXTURES_DIR) + "/lih_sto3g/lih_r1.60.fcidump";
}  // namespace

TEST_CASE("lbfgsb on a shifted quadratic") {
  auto f = [](const std::vector<double>& x) {
    return (x[0] - 1.5) * (x[0] - 1.5) + 4.0 * (x[1] + 0.5) * (x[1] + 0.5);
  };
  auto grad = [](const std::vector<double>& x) {
    return std::vector<double>{2.0 * (x[0] - 1.5), 8.0 * (x[1] + 0.5)};
  };
  const MinimizeResult r =
      lbfgsb_minimize(f, grad, {0.0, 0.0}, std::nullopt, std::nullopt, 200, 1e-12);
  CHECK(r.converged);
  CHECK(std::abs(r.x[0] - 1.5) < 1e-8);
  CHECK(std::abs(r.x[1] + 0.5) < 1e-8);
  CHECK(r.value < 1e-14);

  // bounds clamp the solution to the feasible box
  const MinimizeResult b = lbfgsb_minimize(
      f, grad, {0.0, 0.0}, std::vector<double>{-1.0, -0.2},
      std::vector<double>{1.0, 0.2}, 200, 1e-12);
  CHECK(std::abs(b.x[0] - 1.0) < 1e-8);
  CHECK(std::abs(b.x[1] + 0.2) < 1e-8);
}

TEST_CASE("FCI: one electron in one orbital") {
  MolecularIntegrals ints;
  ints.n_spatial = 1;
  ints.n_electrons = 1;
  ints.spin_multiplicity_2ms = 1;
  ints.e_nuclear = 0.4;
  ints.h1 = Eigen::MatrixXd::Constant(1, 1, -0.9);
  ints.h2 = TwoElectronTensor(1);
  const FciResult r = fci_solve(ints);
  CHECK(r.ground_energy() == doctest::Approx(0.4 - 0.9).epsilon(1e-14));
  CHECK(r.determinants.size() == 1);
}

TEST_CASE("FCI ground energy of the H2 fixture at 0.735 A") {
  const MolecularIntegrals ints = load_fcidump(kH2Fixture);
  const FciResult r = fci_solve(ints);
  CHECK(std::abs(r.ground_energy() - (-1.1373)) < 5e-4);
  // variational: below the Hartree-Fock reference
  CHECK(r.ground_energy() < -1.116998996752995);
}

TEST_CASE("FCI is invariant under spatial-orbital permutation") {
  MolecularIntegrals ints = load_fcidump(kH2Fixture);
  MolecularIntegrals swapped = ints;
  // swap orbitals 0 and 1 everywhere
  auto sw = [](int i) { return 1 - i; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      swapped.h1(i, j) = ints.h1(sw(i), sw(j));
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          swapped.h2.raw(i, j, k, l) = ints.h2(sw(i), sw(j), sw(k), sw(l));
    }
  (*swapped.orbital_energies)[0] = (*ints.orbital_energies)[1];
  (*swapped.orbital_energies)[1] = (*ints.orbital_energies)[0];
  CHECK(std::abs(fci_solve(swapped).ground_energy() -
                 fci_solve(ints).ground_energy()) < 1e-12);
}

TEST_CASE("LiH fixture: frozen core shifts FCI by < 5 mHa") {
  const MolecularIntegrals full = load_fcidump(kLihFixture);
  CHECK(full.n_spatial == 6);
  ActiveSpace frozen;
  frozen.frozen_occupied = {0};
  const MolecularIntegrals fc = apply_active_space(full, frozen);
  const double e_full = fci_solve(full).ground_energy();
  const double e_fc = fci_solve(fc).ground_energy();
  CHECK(e_fc >= e_full - 1e-10);  // frozen core is a constrained FCI
  CHECK(std::abs(e_fc - e_full) < 5e-3);
}

TEST_CASE("qubit_ground_energy: dense and hand oracles") {
  PauliSum z(1);
  z.add_term(PauliString::from_label("Z"), 1.0);
  CHECK(qubit_ground_energy(z) == doctest::Approx(-1.0).epsilon(1e-12));

  PauliSum h(2);
  h.add_term(PauliString::from_label("XX"), 1.0);
  h.add_term(PauliString::from_label("ZI"), 1.0);
  h.add_term(PauliString::from_label("IZ"), 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());
  CHECK(qubit_ground_energy(h) ==
        doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-12));
}

TEST_CASE("qubit_ground_energy matches FCI through the tapered mapping") {
  const MolecularIntegrals ints = load_fcidump(kH2Fixture);
  const QubitMapping m = QubitMapping::parity_tapered(4, 2, 0);
  const PauliSum h = m.map_hamiltonian(to_fermion_hamiltonian(ints));
  CHECK(std::abs(qubit_ground_energy(h) - fci_solve(ints).ground_energy()) <
        1e-10);
}

TEST_CASE("VQE on H2 UCCSD: exact backend reaches FCI, deterministic") {
  const MolecularIntegrals ints = load_fcidump(kH2Fixture);
  const QubitMapping m = QubitMapping::parity_tapered(4, 2, 0);
  const PauliSum h = m.map_hamiltonian(to_fermion_hamiltonian(ints));
  const UccsdSpec spec = make_uccsd_spec(ints);

  VqeProblem p;
  p.hamiltonian = h;
  p.ansatz = build_uccsd(spec, m);
  p.initial.assign(p.ansatz.n_params(), 0.0);
  p.initial[0] = spec.excitations[0].mp2_amplitude;
  const VqeResult a = vqe_minimize(p);
  const double fci = fci_solve(ints).ground_energy();
  CHECK(a.converged);
  CHECK(std::abs(a.energy - fci) < 1e-8);
  CHECK(a.energy >= fci - 1e-10);  // variational bound

  // monotone non-increasing accepted-iteration trace
  for (std::size_t i = 1; i < a.trace.size(); ++i)
    CHECK(a.trace[i] <= a.trace[i - 1] + 1e-12);

  // bit-identical repetition
  const VqeResult b = vqe_minimize(p);
  CHECK(a.energy == b.energy);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i)
    CHECK(a.trace[i] == b.trace[i]);
}

TEST_CASE("VQE with sampled backend stays within shot noise of FCI") {
  const MolecularIntegrals ints = load_fcidump(kH2Fixture);
  const QubitMapping m = QubitMapping::parity_tapered(4, 2, 0);
  const PauliSum h = m.map_hamiltonian(to_fermion_hamiltonian(ints));
  const UccsdSpec spec = make_uccsd_spec(ints);
  VqeProblem p;
  p.hamiltonian = h;
  p.ansatz = build_uccsd(spec, m);
  p.initial.assign(p.ansatz.n_params(), 0.0);
  p.initial[0] = spec.excitations[0].mp2_amplitude;
  p.backend = BackendKind::Sampled;
  p.shots = 20000;
  p.seed = 5;
  p.max_iterations = 60;
  const VqeResult r = vqe_minimize(p);
  CHECK(std::abs(r.energy - fci_solve(ints).ground_energy()) < 0.02);
  const VqeResult r2 = vqe_minimize(p);
  CHECK(r.energy == r2.energy);  // seeded determinism
}

TEST_CASE("heuristic multistart reaches FCI on the 2-qubit preset") {
  const MolecularIntegrals ints = load_fcidump(kH2Fixture);
  const QubitMapping m = QubitMapping::parity_tapered(4, 2, 0);
  VqeProblem p;
  p.hamiltonian = m.map_hamiltonian(to_fermion_hamiltonian(ints));
  p.ansatz = build_heuristic(2, 1);
  p.initial.assign(p.ansatz.n_params(), 0.0);
  const VqeResult r = vqe_multistart(p, 8, 21);
  CHECK(std::abs(r.energy - fci_solve(ints).ground_energy()) < 1e-6);
}

TEST_CASE("problem validation") {
  VqeProblem p;
  p.hamiltonian = PauliSum::identity(2, 1.0);
  p.ansatz = build_heuristic(3, 1);  // qubit count mismatch
  p.initial.assign(p.ansatz.n_params(), 0.0);
  CHECK_THROWS_AS(vqe_minimize(p), Error);
  p.ansatz = build_heuristic(2, 1);
  p.initial.assign(2, 0.0);  // wrong parameter count
  CHECK_THROWS_AS(vqe_minimize(p), Error);
}
