#include <bit>
#include <cmath>

#include "wavemol/solver.hpp"

namespace wavemol {

namespace {

// Enumerate occupation masks over `n` orbitals with `k` set bits, ascending.
std::vector<std::uint64_t> combinations(int n, int k) {
  std::vector<std::uint64_t> out;
  if (k < 0 || k > n) return out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  std::uint64_t v = (1ull << k) - 1;
  const std::uint64_t limit = 1ull << n;
  while (v < limit) {
    out.push_back(v);
    // next bit permutation with the same popcount
    const std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
  }
  return out;
}

// Fermionic sign for removing/adding at position p given occupation mask.
inline double jw_sign(std::uint64_t mask, int p) {
  const std::uint64_t below = mask & ((1ull << p) - 1);
  return (std::popcount(below) % 2) ? -1.0 : 1.0;
}

struct DetBasis {
  std::vector<std::uint64_t> dets;
  std::unordered_map<std::uint64_t, int> index;
};

DetBasis build_basis(int n_spatial, int n_alpha, int n_beta) {
  DetBasis b;
  const auto alphas = combinations(n_spatial, n_alpha);
  const auto betas = combinations(n_spatial, n_beta);
  auto spread = [](std::uint64_t spatial_mask, int spin) {
    std::uint64_t out = 0;
    while (spatial_mask) {
      const int i = std::countr_zero(spatial_mask);
      spatial_mask &= spatial_mask - 1;
      out |= 1ull << (2 * i + spin);
    }
    return out;
  };
  for (const std::uint64_t a : alphas)
    for (const std::uint64_t bt : betas)
      b.dets.push_back(spread(a, 0) | spread(bt, 1));
  std::sort(b.dets.begin(), b.dets.end());
  for (std::size_t i = 0; i < b.dets.size(); ++i) b.index[b.dets[i]] = int(i);
  return b;
}

// y += H x, matrix-free application of the second-quantized operator.
void apply_hamiltonian(const FermionHamiltonian& h, const DetBasis& basis,
                       const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const int n = h.n_modes;
  y.setZero();
  for (std::size_t d = 0; d < basis.dets.size(); ++d) {
    const double amp = x[d];
    if (amp == 0.0) continue;
    const std::uint64_t det = basis.dets[d];
    y[d] += h.constant * amp;
    // one-body a+_p a_q
    for (int q = 0; q < n; ++q) {
      if (!((det >> q) & 1)) continue;
      const std::uint64_t d1 = det & ~(1ull << q);
      const double s1 = jw_sign(det, q);
      for (int p = 0; p < n; ++p) {
        if ((d1 >> p) & 1) continue;
        const double v = h.one_body(p, q);
        if (v == 0.0) continue;
        const std::uint64_t d2 = d1 | (1ull << p);
        auto it = basis.index.find(d2);
        if (it == basis.index.end()) continue;
        y[it->second] += v * s1 * jw_sign(d1, p) * amp;
      }
    }
    // two-body 1/2 g(p,q,r,s) a+_p a+_q a_r a_s
    for (int s = 0; s < n; ++s) {
      if (!((det >> s) & 1)) continue;
      const std::uint64_t ds = det & ~(1ull << s);
      const double sgn_s = jw_sign(det, s);
      for (int r = 0; r < n; ++r) {
        if (!((ds >> r) & 1)) continue;
        const std::uint64_t dr = ds & ~(1ull << r);
        const double sgn_r = sgn_s * jw_sign(ds, r);
        for (int q = 0; q < n; ++q) {
          if ((dr >> q) & 1) continue;
          const std::uint64_t dq = dr | (1ull << q);
          const double sgn_q = sgn_r * jw_sign(dr, q);
          for (int p = 0; p < n; ++p) {
            if ((dq >> p) & 1) continue;
            const double v = h.g(p, q, r, s);
            if (v == 0.0) continue;
            const std::uint64_t dp = dq | (1ull << p);
            auto it = basis.index.find(dp);
            if (it == basis.index.end()) continue;
            y[it->second] += 0.5 * v * sgn_q * jw_sign(dq, p) * amp;
          }
        }
      }
    }
  }
}

// Lanczos with full reorthogonalization for the lowest eigenpair(s).
Eigen::VectorXd lanczos_lowest(
    const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& op,
    long dim, int k, Eigen::MatrixXd* vectors_out) {
  const int max_iter = std::min<long>(dim, 200);
  std::vector<Eigen::VectorXd> vs;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss;
  for (long i = 0; i < dim; ++i) v[i] = gauss(rng);
  v.normalize();
  std::vector<double> alpha, beta;
  Eigen::VectorXd w(dim);
  for (int it = 0; it < max_iter; ++it) {
    vs.push_back(v);
    op(v, w);
    alpha.push_back(v.dot(w));
    for (const auto& u : vs) w -= u.dot(w) * u;
    for (const auto& u : vs) w -= u.dot(w) * u;  // second pass
    const double b = w.norm();
    if (b < 1e-12) break;
    beta.push_back(b);
    v = w / b;
  }
  const int m = int(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  const int kk = std::min(k, m);
  Eigen::VectorXd evs = es.eigenvalues().head(kk);
  if (vectors_out) {
    vectors_out->resize(dim, kk);
    for (int j = 0; j < kk; ++j) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
      for (int i = 0; i < m; ++i) x += es.eigenvectors()(i, j) * vs[i];
      vectors_out->col(j) = x.normalized();
    }
  }
  return evs;
}

}  // namespace

FciResult fci_solve(const MolecularIntegrals& ints, int k) {
  ints.validate();
  const int n_alpha = (ints.n_electrons + ints.spin_multiplicity_2ms) / 2;
  const int n_beta = ints.n_electrons - n_alpha;
  if (n_alpha < 0 || n_beta < 0 || n_alpha > ints.n_spatial ||
      n_beta > ints.n_spatial)
    throw Error("fci_solve: invalid electron counts");
  const FermionHamiltonian h = to_fermion_hamiltonian(ints);
  const DetBasis basis = build_basis(ints.n_spatial, n_alpha, n_beta);
  const long dim = long(basis.dets.size());
  if (dim > 1000000) throw Error("fci_solve: determinant space too large");
  k = std::min<long>(k, dim);

  FciResult res;
  res.determinants = basis.dets;
  auto op = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    apply_hamiltonian(h, basis, x, y);
  };
  if (dim <= 4096) {
    Eigen::MatrixXd hm(dim, dim);
    Eigen::VectorXd col(dim), out(dim);
    for (long j = 0; j < dim; ++j) {
      col.setZero();
      col[j] = 1.0;
      op(col, out);
      hm.col(j) = out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hm);
    res.energies = es.eigenvalues().head(k);
    res.vectors = es.eigenvectors().leftCols(k);
  } else {
    Eigen::MatrixXd vecs;
    res.energies = lanczos_lowest(op, dim, k, &vecs);
    res.vectors = vecs;
  }
  // residual check
  Eigen::VectorXd r(dim);
  for (int j = 0; j < res.energies.size(); ++j) {
    op(res.vectors.col(j), r);
    r -= res.energies[j] * res.vectors.col(j);
    if (r.norm() > 1e-7)
      throw Error("fci_solve: eigenpair residual too large");
  }
  return res;
}

double qubit_ground_energy(const PauliSum& h) {
  if (!h.is_hermitian()) throw Error("qubit_ground_energy: non-Hermitian");
  const int n = h.n_qubits();
  if (n > 14) throw Error("qubit_ground_energy: size cap exceeded");
  if (n <= 10) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());
    return es.eigenvalues()[0];
  }
  const long dim = 1ll << n;
  auto op = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    // Hermitian sums with real coefficients can map real vectors to complex
    // ones (Y strings); track the complex part via two real applications.
    Eigen::VectorXcd xc = x.cast<cplx>();
    Eigen::VectorXcd yc = h.apply(xc);
    y = yc.real();
  };
  // For Hamiltonians with Y-strings the real restriction is not invariant;
  // fall back to a complex Lanczos in that case.
  bool has_y = false;
  for (const auto& [p, c] : h.terms())
    if (std::popcount(p.x_mask & p.z_mask) % 2) has_y = true;
  if (!has_y) {
    Eigen::VectorXd evs = lanczos_lowest(op, dim, 1, nullptr);
    return evs[0];
  }
  // complex Lanczos
  std::mt19937_64 rng(4321);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(dim);
  for (long i = 0; i < dim; ++i) v[i] = cplx(gauss(rng), gauss(rng));
  v.normalize();
  std::vector<Eigen::VectorXcd> vs;
  std::vector<double> alpha, beta;
  for (int it = 0; it < 150; ++it) {
    vs.push_back(v);
    Eigen::VectorXcd w = h.apply(v);
    alpha.push_back(v.dot(w).real());
    for (const auto& u : vs) w -= u.dot(w) * u;
    for (const auto& u : vs) w -= u.dot(w) * u;
    const double b = w.norm();
    if (b < 1e-12) break;
    beta.push_back(b);
    v = w / b;
  }
  const int m = int(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  return es.eigenvalues()[0];
}

}  // namespace wavemol
