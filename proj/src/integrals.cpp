#include "wavemol/integrals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace wavemol {

namespace {
constexpr double kMagnitudeFloor = 1e-12;  // entries below this are dropped
}

void TwoElectronTensor::set_sym(int i, int j, int k, int l, double v) {
  const int perms[8][4] = {{i, j, k, l}, {j, i, k, l}, {i, j, l, k},
                           {j, i, l, k}, {k, l, i, j}, {l, k, i, j},
                           {k, l, j, i}, {l, k, j, i}};
  for (const auto& p : perms) data_[idx(p[0], p[1], p[2], p[3])] = v;
}

void MolecularIntegrals::validate() const {
  if (n_electrons > 2 * n_spatial)
    throw Error("MolecularIntegrals: more electrons than spin orbitals");
  for (int p = 0; p < n_spatial; ++p)
    for (int q = 0; q < p; ++q)
      if (std::abs(h1(p, q) - h1(q, p)) > 1e-12)
        throw Error("MolecularIntegrals: h1 not symmetric");
}

Eigen::VectorXd MolecularIntegrals::fock_diagonal() const {
  const int nocc = n_electrons / 2;
  Eigen::VectorXd eps(n_spatial);
  for (int p = 0; p < n_spatial; ++p) {
    double e = h1(p, p);
    for (int i = 0; i < nocc; ++i)
      e += 2.0 * h2(p, p, i, i) - h2(p, i, i, p);
    eps[p] = e;
  }
  return eps;
}

Eigen::VectorXd MolecularIntegrals::energies_or_fock() const {
  if (orbital_energies) return *orbital_energies;
  return fock_diagonal();
}

namespace {

int parse_namelist_int(const std::string& header, const std::string& key,
                       int line_no) {
  auto pos = header.find(key);
  if (pos == std::string::npos)
    throw Error("FCIDUMP parse error at line " + std::to_string(line_no) +
                ": missing " + key);
  pos += key.size();
  while (pos < header.size() && (header[pos] == '=' || header[pos] == ' '))
    ++pos;
  std::size_t end = pos;
  while (end < header.size() &&
         (std::isdigit(static_cast<unsigned char>(header[end])) ||
          header[end] == '-' || header[end] == '+'))
    ++end;
  if (end == pos)
    throw Error("FCIDUMP parse error at line " + std::to_string(line_no) +
                ": bad value for " + key);
  return std::stoi(header.substr(pos, end - pos));
}

}  // namespace

MolecularIntegrals parse_fcidump(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::string header;
  bool have_header = false;
  // namelist: from &FCI up to &END (or a line ending in '/')
  while (std::getline(in, line)) {
    ++line_no;
    header += line + " ";
    if (line.find("&END") != std::string::npos ||
        line.find("/") != std::string::npos) {
      have_header = true;
      break;
    }
    if (line_no > 100) break;
  }
  if (!have_header || header.find("&FCI") == std::string::npos)
    throw Error("FCIDUMP parse error at line 1: missing &FCI namelist");

  MolecularIntegrals ints;
  ints.n_spatial = parse_namelist_int(header, "NORB", line_no);
  ints.n_electrons = parse_namelist_int(header, "NELEC", line_no);
  ints.spin_multiplicity_2ms = parse_namelist_int(header, "MS2", line_no);
  if (ints.n_spatial <= 0)
    throw Error("FCIDUMP parse error: NORB must be positive");
  const int n = ints.n_spatial;
  ints.h1 = Eigen::MatrixXd::Zero(n, n);
  ints.h2 = TwoElectronTensor(n);
  Eigen::VectorXd eps = Eigen::VectorXd::Zero(n);
  bool have_eps = false;

  auto check_idx = [&](int i) {
    if (i < 0 || i > n)
      throw Error("orbital index exceeds NORB (index " + std::to_string(i) +
                  ", NORB " + std::to_string(n) + ")");
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ls(line);
    double v;
    int i, j, k, l;
    if (!(ls >> v >> i >> j >> k >> l))
      throw Error("FCIDUMP parse error at line " + std::to_string(line_no));
    check_idx(i); check_idx(j); check_idx(k); check_idx(l);
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      ints.e_nuclear = v;
    } else if (j == 0 && k == 0 && l == 0) {
      eps[i - 1] = v;
      have_eps = true;
    } else if (k == 0 && l == 0) {
      if (std::abs(v) < kMagnitudeFloor) continue;
      const double prev = ints.h1(i - 1, j - 1);
      if (prev != 0.0 && std::abs(prev - v) > 1e-10)
        throw Error("inconsistent integral record at line " +
                    std::to_string(line_no));
      ints.h1(i - 1, j - 1) = v;
      ints.h1(j - 1, i - 1) = v;
    } else if (j == 0 || (k == 0) != (l == 0)) {
      throw Error("FCIDUMP parse error at line " + std::to_string(line_no) +
                  ": malformed index pattern");
    } else {
      if (std::abs(v) < kMagnitudeFloor) continue;
      const double prev = ints.h2(i - 1, j - 1, k - 1, l - 1);
      if (prev != 0.0 && std::abs(prev - v) > 1e-10)
        throw Error("inconsistent integral record at line " +
                    std::to_string(line_no));
      ints.h2.set_sym(i - 1, j - 1, k - 1, l - 1, v);
    }
  }
  if (have_eps) ints.orbital_energies = eps;
  ints.validate();
  if (ints.orbital_energies) {
    // flag non-canonical inputs (not matching the Fock diagonal)
    Eigen::VectorXd fock = ints.fock_diagonal();
    ints.canonical = (fock - *ints.orbital_energies).cwiseAbs().maxCoeff() < 1e-6;
  }
  return ints;
}

MolecularIntegrals load_fcidump(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open FCIDUMP file: " + path);
  return parse_fcidump(f);
}

void write_fcidump(std::ostream& out, const MolecularIntegrals& ints) {
  const int n = ints.n_spatial;
  out << "&FCI NORB=" << n << ",NELEC=" << ints.n_electrons
      << ",MS2=" << ints.spin_multiplicity_2ms << ",\n&END\n";
  out << std::scientific << std::setprecision(16);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k) {
        const int lmax = (k == i) ? j : k;
        for (int l = 0; l <= lmax; ++l) {
          const double v = ints.h2(i, j, k, l);
          if (std::abs(v) > kMagnitudeFloor)
            out << " " << v << " " << i + 1 << " " << j + 1 << " " << k + 1
                << " " << l + 1 << "\n";
        }
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (std::abs(ints.h1(i, j)) > kMagnitudeFloor)
        out << " " << ints.h1(i, j) << " " << i + 1 << " " << j + 1
            << " 0 0\n";
  if (ints.orbital_energies)
    for (int i = 0; i < n; ++i)
      out << " " << (*ints.orbital_energies)[i] << " " << i + 1
          << " 0 0 0\n";
  out << " " << ints.e_nuclear << " 0 0 0 0\n";
}

MolecularIntegrals apply_active_space(const MolecularIntegrals& ints,
                                      const ActiveSpace& space) {
  const int n = ints.n_spatial;
  const int nocc = ints.n_electrons / 2;
  for (int f : space.frozen_occupied) {
    if (f < 0 || f >= nocc)
      throw Error("active space: frozen orbital not doubly occupied");
    if (space.removed_virtual.count(f))
      throw Error("active space: frozen and removed sets overlap");
  }
  for (int r : space.removed_virtual)
    if (r < nocc || r >= n)
      throw Error("cannot remove occupied orbital");

  std::vector<int> active;
  for (int p = 0; p < n; ++p)
    if (!space.frozen_occupied.count(p) && !space.removed_virtual.count(p))
      active.push_back(p);

  MolecularIntegrals out;
  out.n_spatial = static_cast<int>(active.size());
  out.n_electrons =
      ints.n_electrons - 2 * static_cast<int>(space.frozen_occupied.size());
  out.spin_multiplicity_2ms = ints.spin_multiplicity_2ms;
  out.e_nuclear = ints.e_nuclear;
  for (int f : space.frozen_occupied) {
    out.e_nuclear += 2.0 * ints.h1(f, f);
    for (int f2 : space.frozen_occupied)
      out.e_nuclear += 2.0 * ints.h2(f, f, f2, f2) - ints.h2(f, f2, f2, f);
  }
  const int na = out.n_spatial;
  out.h1 = Eigen::MatrixXd::Zero(na, na);
  out.h2 = TwoElectronTensor(na);
  for (int p = 0; p < na; ++p)
    for (int q = 0; q < na; ++q) {
      double v = ints.h1(active[p], active[q]);
      for (int f : space.frozen_occupied)
        v += 2.0 * ints.h2(active[p], active[q], f, f) -
             ints.h2(active[p], f, f, active[q]);
      out.h1(p, q) = v;
    }
  for (int p = 0; p < na; ++p)
    for (int q = 0; q < na; ++q)
      for (int r = 0; r < na; ++r)
        for (int s = 0; s < na; ++s)
          out.h2.raw(p, q, r, s) =
              ints.h2(active[p], active[q], active[r], active[s]);
  if (ints.orbital_energies) {
    Eigen::VectorXd eps(na);
    for (int p = 0; p < na; ++p) eps[p] = (*ints.orbital_energies)[active[p]];
    out.orbital_energies = eps;
  }
  out.canonical = ints.canonical;
  return out;
}

FermionHamiltonian to_fermion_hamiltonian(const MolecularIntegrals& ints) {
  ints.validate();
  const int n = ints.n_spatial;
  const int N = 2 * n;
  FermionHamiltonian h;
  h.n_modes = N;
  h.constant = ints.e_nuclear;
  h.one_body = Eigen::MatrixXd::Zero(N, N);
  h.two_body.assign(std::size_t(N) * N * N * N, 0.0);
  // interleaved spin orbitals: so = 2*spatial + spin
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      if (p % 2 == q % 2) h.one_body(p, q) = ints.h1(p / 2, q / 2);
  // coefficient of a+_p a+_q a_r a_s is (ps|qr) in chemists' notation,
  // nonzero only when spin(p)=spin(s) and spin(q)=spin(r)
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      for (int r = 0; r < N; ++r)
        for (int s = 0; s < N; ++s) {
          if (p % 2 != s % 2 || q % 2 != r % 2) continue;
          const double v = ints.h2(p / 2, s / 2, q / 2, r / 2);
          if (std::abs(v) > 1e-15) h.g_ref(p, q, r, s) = v;
        }
  return h;
}

double Mp2Amplitudes::spatial(int i, int j, int a, int b) const {
  for (const auto& [ti, tj, ta, tb, v] : doubles)
    if (ti == i && tj == j && ta == a && tb == b) return v;
  return 0.0;
}

Mp2Amplitudes mp2_amplitudes(const MolecularIntegrals& ints) {
  const int n = ints.n_spatial;
  const int nocc = ints.n_electrons / 2;
  Eigen::VectorXd eps = ints.energies_or_fock();
  Mp2Amplitudes out;
  for (int i = 0; i < nocc; ++i)
    for (int j = 0; j < nocc; ++j)
      for (int a = nocc; a < n; ++a)
        for (int b = nocc; b < n; ++b) {
          const double num = ints.h2(i, a, j, b);
          if (std::abs(num) < 1e-14) {
            out.doubles.emplace_back(i, j, a, b, 0.0);
            continue;
          }
          const double den = eps[i] + eps[j] - eps[a] - eps[b];
          if (std::abs(den) < 1e-8)
            throw Error("MP2 denominator degeneracy for excitation (" +
                        std::to_string(i) + "," + std::to_string(j) + ")->(" +
                        std::to_string(a) + "," + std::to_string(b) + ")");
          out.doubles.emplace_back(i, j, a, b, num / den);
        }
  return out;
}

}  // namespace wavemol
