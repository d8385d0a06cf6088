#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "wavemol/pauli.hpp"

using namespace wavemol;

namespace {

Eigen::Matrix2cd single_pauli(char c) {
  const cplx i(0, 1);
  Eigen::Matrix2cd m;
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
  }
  return m;
}

// Dense matrix via explicit Kronecker products, qubit 0 least significant.
Eigen::MatrixXcd dense_oracle(const PauliString& p) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(1, 1);
  for (int q = 0; q < p.n_qubits; ++q) {
    const Eigen::Matrix2cd s = single_pauli(p.pauli_at(q));
    Eigen::MatrixXcd out(2 * m.rows(), 2 * m.cols());
    out << s(0, 0) * m, s(0, 1) * m, s(1, 0) * m, s(1, 1) * m;
    m = std::move(out);
  }
  return m;
}

}  // namespace

TEST_CASE("label round trip and pauli_at") {
  const PauliString p = PauliString::from_label("XIZY");
  CHECK(p.n_qubits == 4);
  CHECK(p.pauli_at(0) == 'X');
  CHECK(p.pauli_at(1) == 'I');
  CHECK(p.pauli_at(2) == 'Z');
  CHECK(p.pauli_at(3) == 'Y');
  CHECK(p.label() == "XIZY");
  CHECK_THROWS_AS(PauliString::from_label("XQ"), Error);
  CHECK_THROWS_AS(PauliString(2, 0b100, 0), Error);
}

TEST_CASE("single-qubit products with phases") {
  auto mult = [](const char* a, const char* b) {
    return pauli_multiply(PauliString::from_label(a),
                          PauliString::from_label(b));
  };
  const cplx i(0, 1);
  auto [xy, pxy] = mult("X", "Y");
  CHECK(xy.label() == "Z");
  CHECK(pxy == i);
  auto [yx, pyx] = mult("Y", "X");
  CHECK(yx.label() == "Z");
  CHECK(pyx == -i);
  auto [yz, pyz] = mult("Y", "Z");
  CHECK(yz.label() == "X");
  CHECK(pyz == i);
  auto [zx, pzx] = mult("Z", "X");
  CHECK(zx.label() == "Y");
  CHECK(pzx == i);
  auto [xx, pxx] = mult("X", "X");
  CHECK(xx.identity());
  CHECK(pxx == cplx(1));
  CHECK_THROWS_AS(pauli_multiply(PauliString::from_label("X"),
                                 PauliString::from_label("XX")),
                  Error);
}

TEST_CASE("random pairs on <= 3 qubits match the dense 8x8 product") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> bits(0, 7);
  for (int trial = 0; trial < 200; ++trial) {
    const PauliString a(3, bits(rng), bits(rng));
    const PauliString b(3, bits(rng), bits(rng));
    auto [c, phase] = pauli_multiply(a, b);
    const Eigen::MatrixXcd lhs = dense_oracle(a) * dense_oracle(b);
    const Eigen::MatrixXcd rhs = phase * dense_oracle(c);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("commutation predicates") {
  auto P = [](const char* s) { return PauliString::from_label(s); };
  CHECK(P("XX").commutes_with(P("ZZ")));        // anticommute on both qubits
  CHECK_FALSE(P("XX").qubitwise_commutes(P("ZZ")));
  CHECK_FALSE(P("XI").commutes_with(P("ZI")));
  CHECK(P("XI").qubitwise_commutes(P("IZ")));
  CHECK(P("XZ").qubitwise_commutes(P("XI")));
  // symplectic form against the dense commutator for random pairs
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> bits(0, 7);
  for (int trial = 0; trial < 100; ++trial) {
    const PauliString a(3, bits(rng), bits(rng));
    const PauliString b(3, bits(rng), bits(rng));
    const Eigen::MatrixXcd comm =
        dense_oracle(a) * dense_oracle(b) - dense_oracle(b) * dense_oracle(a);
    CHECK(a.commutes_with(b) == (comm.cwiseAbs().maxCoeff() < 1e-14));
  }
}

TEST_CASE("pauli_apply_basis matches the dense column") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> bits(0, 7);
  for (int trial = 0; trial < 100; ++trial) {
    const PauliString p(3, bits(rng), bits(rng));
    const Eigen::MatrixXcd m = dense_oracle(p);
    for (std::uint64_t b = 0; b < 8; ++b) {
      auto [b2, phase] = pauli_apply_basis(p, b);
      for (std::uint64_t r = 0; r < 8; ++r)
        CHECK(std::abs(m(r, b) - (r == b2 ? phase : cplx(0))) < 1e-14);
    }
  }
}

TEST_CASE("PauliSum algebra and pruning") {
  PauliSum s(1);
  s.add_term(PauliString::from_label("X"), 0.5);
  s.add_term(PauliString::from_label("X"), -0.5);
  s.simplify();
  CHECK(s.size() == 0);

  PauliSum a(1), b(1);
  a.add_term(PauliString::from_label("X"), 1.0);
  b.add_term(PauliString::from_label("Y"), 1.0);
  const PauliSum prod = a * b;  // XY = iZ
  CHECK(prod.size() == 1);
  CHECK(std::abs(prod.coefficient(PauliString::from_label("Z")) - cplx(0, 1)) <
        1e-15);
  CHECK_FALSE(prod.is_hermitian());
  CHECK(a.is_hermitian());
  // adjoint of iZ is -iZ
  CHECK(std::abs(prod.adjoint().coefficient(PauliString::from_label("Z")) -
                 cplx(0, -1)) < 1e-15);
  PauliSum mixed(2);
  mixed.add_term(PauliString::from_label("XI"), 1.0);
  CHECK_THROWS_AS(mixed.add_term(PauliString::from_label("X"), 1.0), Error);
}

TEST_CASE("to_dense and apply agree with the Kronecker oracle") {
  PauliSum h(2);
  h.add_term(PauliString::from_label("XX"), 0.25);
  h.add_term(PauliString::from_label("ZI"), -1.5);
  h.add_term(PauliString::from_label("IY"), cplx(0, 0.75));
  Eigen::MatrixXcd expect = 0.25 * dense_oracle(PauliString::from_label("XX")) -
                            1.5 * dense_oracle(PauliString::from_label("ZI")) +
                            cplx(0, 0.75) * dense_oracle(PauliString::from_label("IY"));
  CHECK((h.to_dense() - expect).cwiseAbs().maxCoeff() < 1e-14);

  Eigen::VectorXcd v(4);
  v << cplx(0.2, 0.1), cplx(-0.4, 0), cplx(0.3, -0.5), cplx(0.1, 0.6);
  CHECK((h.apply(v) - expect * v).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("serialize round trip is deterministic and exact") {
  PauliSum h(3);
  h.add_term(PauliString::from_label("XYZ"), 0.123456789012345);
  h.add_term(PauliString::from_label("IIZ"), -2.0 / 3.0);
  h.add_term(PauliString::from_label("ZIX"), cplx(0.25, -0.75));
  const std::string text = h.serialize();
  std::istringstream in(text);
  const PauliSum back = PauliSum::deserialize(in);
  CHECK(back.size() == h.size());
  for (const auto& [p, c] : h.terms())
    CHECK(std::abs(back.coefficient(p) - c) < 1e-15);
  CHECK(back.serialize() == text);
  // label-sorted order
  CHECK(text.find("IIZ") < text.find("XYZ"));
  CHECK(text.find("XYZ") < text.find("ZIX"));
}
