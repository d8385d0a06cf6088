#include "wavemol/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <sstream>

namespace wavemol {

PauliString::PauliString(int n, std::uint64_t x, std::uint64_t z)
    : n_qubits(n), x_mask(x), z_mask(z) {
  if (n < 0 || n > 64) throw Error("PauliString: qubit count out of range");
  const std::uint64_t valid = n == 64 ? ~0ull : ((1ull << n) - 1);
  if ((x & ~valid) || (z & ~valid))
    throw Error("PauliString: mask exceeds qubit count");
}

PauliString PauliString::from_label(const std::string& label) {
  PauliString p;
  p.n_qubits = static_cast<int>(label.size());
  for (int q = 0; q < p.n_qubits; ++q) {
    switch (label[q]) {
      case 'I': break;
      case 'X': p.x_mask |= 1ull << q; break;
      case 'Y': p.x_mask |= 1ull << q; p.z_mask |= 1ull << q; break;
      case 'Z': p.z_mask |= 1ull << q; break;
      default: throw Error("PauliString: bad label character");
    }
  }
  return p;
}

char PauliString::pauli_at(int q) const {
  const bool x = (x_mask >> q) & 1, z = (z_mask >> q) & 1;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliString::label() const {
  std::string s(n_qubits, 'I');
  for (int q = 0; q < n_qubits; ++q) s[q] = pauli_at(q);
  return s;
}

bool PauliString::commutes_with(const PauliString& o) const {
  const int anti = std::popcount(x_mask & o.z_mask) +
                   std::popcount(z_mask & o.x_mask);
  return anti % 2 == 0;
}

bool PauliString::qubitwise_commutes(const PauliString& o) const {
  const std::uint64_t sa = x_mask | z_mask, sb = o.x_mask | o.z_mask;
  const std::uint64_t shared = sa & sb;
  return ((x_mask ^ o.x_mask) & shared) == 0 &&
         ((z_mask ^ o.z_mask) & shared) == 0;
}

std::pair<PauliString, cplx> pauli_multiply(const PauliString& a,
                                            const PauliString& b) {
  if (a.n_qubits != b.n_qubits) throw Error("pauli_multiply: size mismatch");
  PauliString out;
  out.n_qubits = a.n_qubits;
  out.x_mask = a.x_mask ^ b.x_mask;
  out.z_mask = a.z_mask ^ b.z_mask;
  // phase exponent of i: per qubit, sigma_u sigma_v = i^{e} sigma_w with the
  // Levi-Civita sign; accumulate mod 4 using the symplectic form.
  int e = 0;
  for (int q = 0; q < a.n_qubits; ++q) {
    const int ax = (a.x_mask >> q) & 1, az = (a.z_mask >> q) & 1;
    const int bx = (b.x_mask >> q) & 1, bz = (b.z_mask >> q) & 1;
    if ((ax | az) == 0 || (bx | bz) == 0) continue;
    if (ax == bx && az == bz) continue;  // equal Paulis, product I
    // table of i-exponents for XY=iZ, YZ=iX, ZX=iY and reverses
    static const int tbl[4][4] = {
        // columns/rows indexed by (x + 2z): 1=X, 2=Z, 3=Y
        {0, 0, 0, 0}, {0, 0, 3, 1}, {0, 1, 0, 3}, {0, 3, 1, 0}};
    e = (e + tbl[ax + 2 * az][bx + 2 * bz]) % 4;
  }
  static const cplx phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return {out, phases[e]};
}

PauliSum PauliSum::identity(int n_qubits, cplx coeff) {
  PauliSum s(n_qubits);
  s.add_term(PauliString(n_qubits, 0, 0), coeff);
  return s;
}

void PauliSum::add_term(const PauliString& p, cplx coeff) {
  if (n_qubits_ == 0) n_qubits_ = p.n_qubits;
  if (p.n_qubits != n_qubits_) throw Error("PauliSum: qubit count mismatch");
  terms_[p] += coeff;
}

PauliSum& PauliSum::operator+=(const PauliSum& o) {
  for (const auto& [p, c] : o.terms_) add_term(p, c);
  simplify();
  return *this;
}

PauliSum& PauliSum::operator*=(cplx s) {
  for (auto& [p, c] : terms_) c *= s;
  simplify();
  return *this;
}

PauliSum PauliSum::operator*(const PauliSum& o) const {
  PauliSum out(n_qubits_);
  for (const auto& [pa, ca] : terms_)
    for (const auto& [pb, cb] : o.terms_) {
      auto [p, ph] = pauli_multiply(pa, pb);
      out.add_term(p, ca * cb * ph);
    }
  out.simplify();
  return out;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_qubits_);
  for (const auto& [p, c] : terms_) out.add_term(p, std::conj(c));
  return out;
}

void PauliSum::simplify() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = std::abs(it->second) < kPruneThreshold ? terms_.erase(it)
                                                : std::next(it);
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& [p, c] : terms_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

cplx PauliSum::coefficient(const PauliString& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? cplx(0) : it->second;
}

std::pair<std::uint64_t, cplx> pauli_apply_basis(const PauliString& p,
                                                 std::uint64_t basis) {
  // P|b> : X flips bits, Z gives (-1)^{b.z}, Y = iXZ per qubit.
  const std::uint64_t flipped = basis ^ p.x_mask;
  int minus = std::popcount(basis & p.z_mask);
  const int ys = std::popcount(p.x_mask & p.z_mask);
  // Y|0> = i|1>, Y|1> = -i|0>: phase i^{ys} * (-1)^{bits that were 1 on Y}
  // fold Y's Z-part already counted in `minus`; remaining factor i^{ys}
  static const cplx iphase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  cplx ph = iphase[ys % 4] * (minus % 2 ? -1.0 : 1.0);
  return {flipped, ph};
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  if (n_qubits_ > 12) throw Error("PauliSum::to_dense: size cap exceeded");
  const std::uint64_t dim = 1ull << n_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [p, c] : terms_)
    for (std::uint64_t b = 0; b < dim; ++b) {
      auto [b2, ph] = pauli_apply_basis(p, b);
      m(b2, b) += c * ph;
    }
  return m;
}

Eigen::VectorXcd PauliSum::apply(const Eigen::VectorXcd& v) const {
  const std::uint64_t dim = static_cast<std::uint64_t>(v.size());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& [p, c] : terms_)
    for (std::uint64_t b = 0; b < dim; ++b) {
      if (v[b] == cplx(0)) continue;
      auto [b2, ph] = pauli_apply_basis(p, b);
      out[b2] += c * ph * v[b];
    }
  return out;
}

std::string PauliSum::serialize() const {
  std::vector<std::pair<std::string, cplx>> rows;
  rows.reserve(terms_.size());
  for (const auto& [p, c] : terms_) rows.emplace_back(p.label(), c);
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ostringstream os;
  os.precision(17);
  for (const auto& [label, c] : rows) {
    if (std::abs(c.imag()) > kPruneThreshold)
      os << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
         << "i " << label << "\n";
    else
      os << c.real() << " " << label << "\n";
  }
  return os.str();
}

PauliSum PauliSum::deserialize(std::istream& in) {
  PauliSum out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string coeff_tok, label;
    if (!(ls >> coeff_tok >> label)) throw Error("PauliSum: bad term line");
    cplx c;
    auto ipos = coeff_tok.find('i');
    if (ipos != std::string::npos) {
      // format real+imagi / real-imagi
      auto split = coeff_tok.find_last_of("+-", ipos);
      double re = std::stod(coeff_tok.substr(0, split));
      double im = std::stod(coeff_tok.substr(split, ipos - split));
      c = {re, im};
    } else {
      c = std::stod(coeff_tok);
    }
    out.add_term(PauliString::from_label(label), c);
  }
  out.simplify();
  return out;
}

}  // namespace wavemol
