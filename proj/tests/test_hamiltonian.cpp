#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wavemol/integrals.hpp"

using namespace wavemol;

#ifndef FIXTURES_DIR
#define FIXTURES_DIR "fixtures"
#endif

namespace {
const std::string kH2Fixture =
    std::string(FIXTURES_DIR) + "/h2_sto3g/h2_r0.735.fcidump";
}

TEST_CASE("constant-only FCIDUMP") {
  std::istringstream in(
      "&FCI NORB=2,NELEC=2,MS2=0\n&END\n 0.7137 0 0 0 0\n");
  const MolecularIntegrals ints = parse_fcidump(in);
  CHECK(ints.n_spatial == 2);
  CHECK(ints.n_electrons == 2);
  CHECK(ints.spin_multiplicity_2ms == 0);
  CHECK(ints.e_nuclear == doctest::Approx(0.7137).epsilon(1e-12));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(ints.h1(i, j) == 0.0);
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) CHECK(ints.h2(i, j, k, l) == 0.0);
    }
}

TEST_CASE("two-electron record expands to all 8 permutations") {
  std::istringstream in(
      "&FCI NORB=2,NELEC=2,MS2=0\n&END\n 0.5 1 1 2 2\n 0.0 0 0 0 0\n");
  const MolecularIntegrals ints = parse_fcidump(in);
  // (11|22): images under the 8-fold chemists' symmetry
  CHECK(ints.h2(0, 0, 1, 1) == 0.5);
  CHECK(ints.h2(1, 1, 0, 0) == 0.5);
  std::istringstream in2(
      "&FCI NORB=2,NELEC=2,MS2=0\n&END\n 0.25 1 2 1 2\n 0.0 0 0 0 0\n");
  const MolecularIntegrals m = parse_fcidump(in2);
  // (12|12) = (21|12) = (12|21) = (21|21)
  CHECK(m.h2(0, 1, 0, 1) == 0.25);
  CHECK(m.h2(1, 0, 0, 1) == 0.25);
  CHECK(m.h2(0, 1, 1, 0) == 0.25);
  CHECK(m.h2(1, 0, 1, 0) == 0.25);
  CHECK(m.h2(0, 0, 1, 1) == 0.0);
}

TEST_CASE("parse errors carry diagnostics") {
  std::istringstream bad_header("NORB=2\n 0.0 0 0 0 0\n");
  CHECK_THROWS_WITH_AS(parse_fcidump(bad_header),
                       doctest::Contains("line 1"), Error);
  std::istringstream bad_index(
      "&FCI NORB=2,NELEC=2,MS2=0\n&END\n 0.5 3 1 0 0\n");
  CHECK_THROWS_WITH_AS(parse_fcidump(bad_index),
                       doctest::Contains("orbital index exceeds NORB"), Error);
  std::istringstream inconsistent(
      "&FCI NORB=2,NELEC=2,MS2=0\n&END\n 0.5 1 2 0 0\n 0.6 2 1 0 0\n");
  CHECK_THROWS_WITH_AS(parse_fcidump(inconsistent),
                       doctest::Contains("inconsistent integral record"),
                       Error);
  std::istringstream garbage(
      "&FCI NORB=2,NELEC=2,MS2=0\n&END\n not-a-number 1 1 0 0\n");
  CHECK_THROWS_AS(parse_fcidump(garbage), Error);
}

TEST_CASE("fixture round trip: parse -> write -> parse is exact") {
  const MolecularIntegrals a = load_fcidump(kH2Fixture);
  std::ostringstream out;
  write_fcidump(out, a);
  std::istringstream in(out.str());
  const MolecularIntegrals b = parse_fcidump(in);
  CHECK(b.n_spatial == a.n_spatial);
  CHECK(b.n_electrons == a.n_electrons);
  CHECK(b.e_nuclear == a.e_nuclear);
  for (int i = 0; i < a.n_spatial; ++i)
    for (int j = 0; j < a.n_spatial; ++j) {
      CHECK(b.h1(i, j) == a.h1(i, j));
      for (int k = 0; k < a.n_spatial; ++k)
        for (int l = 0; l < a.n_spatial; ++l)
          CHECK(b.h2(i, j, k, l) == a.h2(i, j, k, l));
    }
  REQUIRE(a.orbital_energies.has_value());
  REQUIRE(b.orbital_energies.has_value());
  CHECK((*a.orbital_energies - *b.orbital_energies).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("active space: identity and frozen-core hand contraction") {
  MolecularIntegrals ints;
  ints.n_spatial = 2;
  ints.n_electrons = 4;
  ints.e_nuclear = 0.25;
  ints.h1 = Eigen::MatrixXd::Zero(2, 2);
  ints.h1 << -1.2, 0.1, 0.1, -0.3;
  ints.h2 = TwoElectronTensor(2);
  ints.h2.set_sym(0, 0, 0, 0, 0.6);
  ints.h2.set_sym(1, 1, 1, 1, 0.5);
  ints.h2.set_sym(0, 0, 1, 1, 0.3);
  ints.h2.set_sym(0, 1, 0, 1, 0.1);
  ints.orbital_energies = Eigen::VectorXd::Zero(2);
  *ints.orbital_energies << -1.0, 0.5;

  const MolecularIntegrals same = apply_active_space(ints, ActiveSpace{});
  CHECK(same.n_spatial == 2);
  CHECK(same.e_nuclear == ints.e_nuclear);
  CHECK(same.h1(0, 1) == ints.h1(0, 1));

  ActiveSpace freeze0;
  freeze0.frozen_occupied = {0};
  const MolecularIntegrals fc = apply_active_space(ints, freeze0);
  CHECK(fc.n_spatial == 1);
  CHECK(fc.n_electrons == 2);
  // constant shift 2 h1[ff] + (ff|ff)
  const double shift = 2 * (-1.2) + 0.6;
  CHECK(fc.e_nuclear == doctest::Approx(0.25 + shift).epsilon(1e-14));
  // h1_eff[11] = h1[11] + 2(11|00) - (10|01)
  CHECK(fc.h1(0, 0) == doctest::Approx(-0.3 + 2 * 0.3 - 0.1).epsilon(1e-14));
  CHECK(fc.h2(0, 0, 0, 0) == 0.5);

  ActiveSpace bad;
  bad.removed_virtual = {0};
  ints.n_electrons = 2;
  CHECK_THROWS_WITH_AS(apply_active_space(ints, bad),
                       doctest::Contains("cannot remove occupied orbital"),
                       Error);
}

TEST_CASE("one-orbital fermion Hamiltonian") {
  MolecularIntegrals ints;
  ints.n_spatial = 1;
  ints.n_electrons = 2;
  ints.e_nuclear = 0.5;
  ints.h1 = Eigen::MatrixXd::Constant(1, 1, -0.75);
  ints.h2 = TwoElectronTensor(1);
  const FermionHamiltonian h = to_fermion_hamiltonian(ints);
  CHECK(h.n_modes == 2);
  CHECK(h.constant == 0.5);
  CHECK(h.one_body(0, 0) == -0.75);
  CHECK(h.one_body(1, 1) == -0.75);
  CHECK(h.one_body(0, 1) == 0.0);  // alpha/beta mixing forbidden
  CHECK(h.one_body(1, 0) == 0.0);
}

TEST_CASE("fermion Hamiltonian is Hermitian on the H2 fixture") {
  const MolecularIntegrals ints = load_fcidump(kH2Fixture);
  const FermionHamiltonian h = to_fermion_hamiltonian(ints);
  CHECK(h.n_modes == 4);
  CHECK((h.one_body - h.one_body.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  // g(p,q,r,s) (coefficient of a+p a+q a_r a_s) = g(s,r,q,p) under dagger
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
          CHECK(h.g(p, q, r, s) ==
                doctest::Approx(h.g(s, r, q, p)).epsilon(1e-12));
  // spin-forbidden one-body entries exactly zero
  CHECK(h.one_body(0, 1) == 0.0);
  CHECK(h.one_body(2, 1) == 0.0);
}

TEST_CASE("MP2 amplitudes: zero tensor and two-orbital toy") {
  MolecularIntegrals ints;
  ints.n_spatial = 2;
  ints.n_electrons = 2;
  ints.h1 = Eigen::MatrixXd::Zero(2, 2);
  ints.h2 = TwoElectronTensor(2);
  ints.orbital_energies = Eigen::VectorXd::Zero(2);
  *ints.orbital_energies << -1.0, 0.5;
  for (const auto& [i, j, a, b, amp] : mp2_amplitudes(ints).doubles)
    CHECK(amp == 0.0);

  const double v = 0.17, delta = 1.5;  // gap = eps_virt - eps_occ
  ints.h2.set_sym(0, 1, 0, 1, v);
  const Mp2Amplitudes t = mp2_amplitudes(ints);
  REQUIRE(t.doubles.size() == 1);
  CHECK(t.spatial(0, 0, 1, 1) == doctest::Approx(v / (-2.0 * delta)).epsilon(1e-14));

  // degenerate denominator
  *ints.orbital_energies << 0.3, 0.3;
  CHECK_THROWS_WITH_AS(mp2_amplitudes(ints),
                       doctest::Contains("MP2 denominator degeneracy"), Error);
}

TEST_CASE("H2 fixture has exactly one nonzero double amplitude") {
  const MolecularIntegrals ints = load_fcidump(kH2Fixture);
  const Mp2Amplitudes t = mp2_amplitudes(ints);
  int nonzero = 0;
  for (const auto& [i, j, a, b, amp] : t.doubles)
    if (std::abs(amp) > 1e-12) {
      ++nonzero;
      CHECK(i == 0);
      CHECK(j == 0);
      CHECK(a == 1);
      CHECK(b == 1);
      CHECK(amp < 0.0);  // attractive correlation
    }
  CHECK(nonzero == 1);
}

TEST_CASE("Fock diagonal fallback matches stored canonical energies") {
  MolecularIntegrals ints = load_fcidump(kH2Fixture);
  REQUIRE(ints.orbital_energies.has_value());
  const Eigen::VectorXd stored = *ints.orbital_energies;
  ints.orbital_energies.reset();
  const Eigen::VectorXd computed = ints.energies_or_fock();
  CHECK((stored - computed).cwiseAbs().maxCoeff() < 1e-8);
}
