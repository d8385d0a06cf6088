#include "wavemol/mapping.hpp"

#include <bit>
#include <cmath>

namespace wavemol {

QubitMapping QubitMapping::jordan_wigner(int n_modes) {
  return QubitMapping(MappingKind::JordanWigner, n_modes);
}

QubitMapping QubitMapping::parity(int n_modes) {
  return QubitMapping(MappingKind::Parity, n_modes);
}

QubitMapping QubitMapping::parity_tapered(int n_modes, int n_electrons,
                                          int two_ms) {
  if (n_modes % 2 != 0)
    throw Error("parity tapering requires an even number of spin orbitals");
  QubitMapping m(MappingKind::Parity, n_modes);
  TaperingInfo t;
  t.n_modes = n_modes;
  const int mid = n_modes / 2 - 1;
  const int top = n_modes - 1;
  t.removed_positions = {mid, top};
  t.generators = {PauliString(n_modes, 0, 1ull << mid),
                  PauliString(n_modes, 0, 1ull << top)};
  if ((n_electrons + two_ms) % 2 != 0)
    throw Error("inconsistent electron count and spin projection");
  const int n_alpha = (n_electrons + two_ms) / 2;
  t.sector_eigenvalues = {(n_alpha % 2) ? -1 : 1,
                          (n_electrons % 2) ? -1 : 1};
  m.taper_ = t;
  return m;
}

int QubitMapping::n_qubits() const {
  return taper_ ? n_modes_ - 2 : n_modes_;
}

int QubitMapping::blocked_position(int m) const {
  // interleaved (a0,b0,a1,b1,...) -> blocked (a0..a_{n-1}, b0..b_{n-1})
  return (m % 2) * (n_modes_ / 2) + m / 2;
}

PauliSum QubitMapping::mode_operator(bool dagger, int mode) const {
  if (mode < 0 || mode >= n_modes_) throw Error("mode index out of range");
  PauliSum out(n_modes_);
  const cplx half(0.5, 0.0);
  const cplx ihalf(0.0, 0.5);
  if (kind_ == MappingKind::JordanWigner) {
    const int q = mode;
    std::uint64_t zprefix = (1ull << q) - 1;
    // a+ = 1/2 (X - iY) Z_{<q};  a = 1/2 (X + iY) Z_{<q}
    out.add_term(PauliString(n_modes_, 1ull << q, zprefix), half);
    out.add_term(PauliString(n_modes_, 1ull << q, zprefix | (1ull << q)),
                 dagger ? -ihalf : ihalf);
  } else {
    const int q = blocked_position(mode);
    // parity basis: a+_q = 1/2 (Z_{q-1} X_q - i Y_q) X_{q+1..N-1}
    std::uint64_t xsuffix = 0;
    for (int k = q; k < n_modes_; ++k) xsuffix |= 1ull << k;
    std::uint64_t zprev = q > 0 ? (1ull << (q - 1)) : 0;
    out.add_term(PauliString(n_modes_, xsuffix, zprev), half);
    out.add_term(PauliString(n_modes_, xsuffix, 1ull << q),
                 dagger ? -ihalf : ihalf);
  }
  return out;
}

PauliSum QubitMapping::map_product(
    const std::vector<std::pair<bool, int>>& ops) const {
  PauliSum acc = PauliSum::identity(n_modes_);
  for (const auto& [dag, mode] : ops) acc = acc * mode_operator(dag, mode);
  return acc;
}

PauliSum QubitMapping::map_hamiltonian(const FermionHamiltonian& h) const {
  PauliSum out(n_modes_);
  if (h.constant != 0.0)
    out.add_term(PauliString(h.n_modes, 0, 0), h.constant);
  for (int p = 0; p < h.n_modes; ++p)
    for (int q = 0; q < h.n_modes; ++q) {
      const double v = h.one_body(p, q);
      if (std::abs(v) < 1e-14) continue;
      PauliSum t = map_product({{true, p}, {false, q}});
      t *= v;
      out += t;
    }
  for (int p = 0; p < h.n_modes; ++p)
    for (int q = 0; q < h.n_modes; ++q)
      for (int r = 0; r < h.n_modes; ++r)
        for (int s = 0; s < h.n_modes; ++s) {
          const double v = h.g(p, q, r, s);
          if (std::abs(v) < 1e-14) continue;
          PauliSum t =
              map_product({{true, p}, {true, q}, {false, r}, {false, s}});
          t *= 0.5 * v;
          out += t;
        }
  out.simplify();
  return taper_ ? apply_taper(out) : out;
}

PauliSum QubitMapping::map_excitation_generator(const Excitation& ex) const {
  if (ex.from.size() != ex.to.size() ||
      (ex.from.size() != 1 && ex.from.size() != 2))
    throw Error("excitation must be a single or double");
  std::vector<std::pair<bool, int>> fwd;
  for (int a : ex.to) fwd.emplace_back(true, a);
  for (auto it = ex.from.rbegin(); it != ex.from.rend(); ++it)
    fwd.emplace_back(false, *it);
  PauliSum t = map_product(fwd);
  PauliSum gen = t;
  PauliSum tdag = t.adjoint();
  // T - T^dag: adjoint of a Pauli term is conj(coeff) * P
  tdag *= -1.0;
  gen += tdag;
  gen.simplify();
  if (taper_) gen = apply_taper(gen);
  return gen;
}

std::uint64_t QubitMapping::reference_bits(std::uint64_t occ) const {
  if (kind_ == MappingKind::JordanWigner) return occ;
  // blocked reorder, then prefix parities
  std::uint64_t blocked = 0;
  for (int m = 0; m < n_modes_; ++m)
    if ((occ >> m) & 1) blocked |= 1ull << blocked_position(m);
  std::uint64_t bits = 0;
  int par = 0;
  for (int q = 0; q < n_modes_; ++q) {
    par ^= static_cast<int>((blocked >> q) & 1);
    if (par) bits |= 1ull << q;
  }
  if (!taper_) return bits;
  std::uint64_t out = 0;
  int oq = 0;
  for (int q = 0; q < n_modes_; ++q) {
    if (q == taper_->removed_positions[0] || q == taper_->removed_positions[1])
      continue;
    if ((bits >> q) & 1) out |= 1ull << oq;
    ++oq;
  }
  return out;
}

PauliSum QubitMapping::apply_taper(const PauliSum& h) const {
  if (!taper_) return h;
  const auto& t = *taper_;
  const int mid = t.removed_positions[0];
  const int top = t.removed_positions[1];
  PauliSum out(n_modes_ - 2);
  for (const auto& [p, c] : h.terms()) {
    if (((p.x_mask >> mid) & 1) || ((p.x_mask >> top) & 1))
      throw Error("symmetry violated by term " + p.label());
    cplx coeff = c;
    if ((p.z_mask >> mid) & 1) coeff *= double(t.sector_eigenvalues[0]);
    if ((p.z_mask >> top) & 1) coeff *= double(t.sector_eigenvalues[1]);
    std::uint64_t x = 0, z = 0;
    int oq = 0;
    for (int q = 0; q < n_modes_; ++q) {
      if (q == mid || q == top) continue;
      if ((p.x_mask >> q) & 1) x |= 1ull << oq;
      if ((p.z_mask >> q) & 1) z |= 1ull << oq;
      ++oq;
    }
    out.add_term(PauliString(n_modes_ - 2, x, z), coeff);
  }
  out.simplify();
  return out;
}

PauliSum jordan_wigner(const FermionHamiltonian& h) {
  return QubitMapping::jordan_wigner(h.n_modes).map_hamiltonian(h);
}

PauliSum parity_map(const FermionHamiltonian& h) {
  return QubitMapping::parity(h.n_modes).map_hamiltonian(h);
}

std::pair<PauliSum, TaperingInfo> taper_z2(const PauliSum& parity_h,
                                           int n_electrons, int two_ms) {
  QubitMapping m =
      QubitMapping::parity_tapered(parity_h.n_qubits(), n_electrons, two_ms);
  return {m.apply_taper(parity_h), *m.taper()};
}

PauliSum x_conjugate(const PauliSum& op, std::uint64_t mask) {
  // X P X flips the sign of every term with Z (or Y) on a conjugated qubit.
  PauliSum out(op.n_qubits());
  for (const auto& [p, c] : op.terms()) {
    const bool flip = std::popcount(p.z_mask & mask) % 2 != 0;
    out.add_term(p, flip ? -c : c);
  }
  out.simplify();
  return out;
}

}  // namespace wavemol
