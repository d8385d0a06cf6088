#include "wavemol/wavelet.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

namespace wavemol {

namespace {

// Minimum-phase Daubechies low-pass taps, sum = sqrt(2), produced offline by
// spectral factorization of the Daubechies polynomial at 60-digit precision
// and rounded to double. Position p holds h_j with j = p - (m-1).
const double kDaub2[4] = {
    -0.1294095225512603811744494,
    0.2241438680420133810259728,
    0.8365163037378079055752938,
    0.4829629131445341433748716,
};
const double kDaub4[8] = {
    -0.01059740178506903210488321,
    0.03288301166688519973540751,
    0.03084138183556076362721936,
    -0.1870348117190930840795707,
    -0.02798376941685985421141375,
    0.6308807679298589078817163,
    0.714846570552915647089922,
    0.2303778133088965008632912,
};
const double kDaub8[16] = {
    -0.0001174767841247695337306282,
    0.0006754494064505693663695476,
    -0.0003917403733769470462980804,
    -0.004870352993451574310422182,
    0.008746094047405776716382743,
    0.01398102791739828164872293,
    -0.04408825393079475150676372,
    -0.01736930100180754616961615,
    0.1287474266204784588570293,
    0.00047248457391328277036059,
    -0.2840155429615469265162031,
    -0.01582910525634930566738055,
    0.5853546836542067127712655,
    0.6756307362972898068078008,
    0.3128715909142999706591624,
    0.05441584224310400995500941,
};

}  // namespace

WaveletFilter build_filter(int order) {
  const double* taps = nullptr;
  switch (order) {
    case 2: taps = kDaub2; break;
    case 4: taps = kDaub4; break;
    case 8: taps = kDaub8; break;
    default: throw Error("unsupported filter order");
  }
  WaveletFilter f;
  f.order = order;
  f.h.assign(taps, taps + 2 * order);
  f.g.resize(2 * order);
  for (int j = f.j_min(); j <= f.j_max(); ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    f.g[j + order - 1] = sign * f.h_at(1 - j);
  }
  return f;
}

double DyadicFunctionTable::interp(const std::vector<double>& v,
                                   double x) const {
  const int m = filter_.order;
  const double lo = 1.0 - m, hi = double(m);
  if (x <= lo || x >= hi) return 0.0;
  const double pos = (x - lo) * double(1ll << level_);
  const std::int64_t k = std::int64_t(std::floor(pos));
  const double frac = pos - double(k);
  const double a = (k >= 0 && k < std::int64_t(v.size())) ? v[k] : 0.0;
  const double b =
      (k + 1 >= 0 && k + 1 < std::int64_t(v.size())) ? v[k + 1] : 0.0;
  return a + frac * (b - a);
}

double DyadicFunctionTable::phi(double x) const { return interp(phi_, x); }
double DyadicFunctionTable::psi(double x) const { return interp(psi_, x); }

DyadicFunctionTable evaluate_cascade(const WaveletFilter& filter, int level) {
  if (level < 0) throw Error("evaluate_cascade: level must be >= 0");
  const int m = filter.order;
  // phi at the interior integers 2-m .. m-1 from the refinement matrix
  // M[k][l] = sqrt(2) h_{2k-l}; endpoints 1-m and m are zero.
  const int ni = 2 * m - 2;
  Eigen::MatrixXd M(ni, ni);
  const double rt2 = std::sqrt(2.0);
  for (int a = 0; a < ni; ++a)
    for (int b = 0; b < ni; ++b) {
      const int k = a + 2 - m, l = b + 2 - m;
      const int j = 2 * k - l;
      M(a, b) = (j >= filter.j_min() && j <= filter.j_max())
                    ? rt2 * filter.h_at(j)
                    : 0.0;
    }
  Eigen::EigenSolver<Eigen::MatrixXd> es(M);
  int best = -1, second = -1;
  for (int i = 0; i < ni; ++i) {
    const double d = std::abs(es.eigenvalues()[i] - std::complex<double>(1, 0));
    if (best < 0 ||
        d < std::abs(es.eigenvalues()[best] - std::complex<double>(1, 0))) {
      second = best;
      best = i;
    } else if (second < 0 ||
               d < std::abs(es.eigenvalues()[second] -
                            std::complex<double>(1, 0))) {
      second = i;
    }
  }
  const double dbest =
      std::abs(es.eigenvalues()[best] - std::complex<double>(1, 0));
  const double dsecond =
      ni > 1 ? std::abs(es.eigenvalues()[second] - std::complex<double>(1, 0))
             : 1.0;
  if (dbest > 1e-8 || dsecond < 1e-8)
    throw Error("degenerate refinement spectrum");

  Eigen::VectorXd phi_int = es.eigenvectors().col(best).real();
  phi_int /= phi_int.sum();  // partition of unity: sum_k phi(k) = 1

  const std::int64_t step0 = 1ll << level;  // finest points per unit interval
  const std::int64_t n = std::int64_t(2 * m - 1) * step0 + 1;
  std::vector<double> phi(n, 0.0);
  for (int k = 2 - m; k <= m - 1; ++k)
    phi[std::int64_t(k - (1 - m)) * step0] = phi_int[k - (2 - m)];

  // Refine level by level: x = k/2^l with k odd uses phi(2x - j) at l-1.
  for (int l = 1; l <= level; ++l) {
    const std::int64_t stride = 1ll << (level - l);
    for (std::int64_t k = stride; k < n; k += 2 * stride) {
      // x = 1-m + k/2^level; 2x - j = 1-m + (2k - (j + m - 1) 2^level)/2^level
      double acc = 0.0;
      for (int j = filter.j_min(); j <= filter.j_max(); ++j) {
        const std::int64_t idx =
            2 * k - std::int64_t(j + m - 1) * step0;
        if (idx >= 0 && idx < n) acc += filter.h_at(j) * phi[idx];
      }
      phi[k] = rt2 * acc;
    }
  }

  std::vector<double> psi(n, 0.0);
  for (std::int64_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = filter.j_min(); j <= filter.j_max(); ++j) {
      const std::int64_t idx = 2 * k - std::int64_t(j + m - 1) * step0;
      if (idx >= 0 && idx < n) acc += filter.g_at(j) * phi[idx];
    }
    psi[k] = rt2 * acc;
  }
  return DyadicFunctionTable(filter, level, std::move(phi), std::move(psi));
}

DualGrid::DualGrid(double h, std::set<GridIndex> coarse_idx,
                   std::set<GridIndex> fine_idx)
    : spacing_fine(h), coarse(std::move(coarse_idx)), fine(std::move(fine_idx)) {
  if (h <= 0) throw Error("DualGrid: spacing must be positive");
  for (const auto& i : fine)
    if (coarse.count(i))
      throw Error("DualGrid: coarse and fine regions overlap");
}

double WaveletMO::norm_squared() const {
  double acc = 0.0;
  for (const auto& [i, s] : S) acc += s * s;
  for (const auto& [i, d] : D)
    for (double v : d) acc += v * v;
  return acc;
}

double synthesize_mo(const WaveletMO& mo, const std::array<double, 3>& point,
                     const DyadicFunctionTable& table) {
  const double h = mo.grid.spacing_fine;
  const double hc = mo.grid.spacing_coarse();
  const double nf = 1.0 / std::sqrt(h * h * h);
  const double nc = 1.0 / std::sqrt(hc * hc * hc);
  double value = 0.0;
  for (const auto& [idx, s] : mo.S) {
    if (s == 0.0) continue;
    const bool is_fine = mo.grid.fine.count(idx) != 0;
    const double sp = is_fine ? h : hc;
    double prod = is_fine ? nf : nc;
    for (int a = 0; a < 3 && prod != 0.0; ++a)
      prod *= table.phi(point[a] / sp - idx[a]);
    value += s * prod;
  }
  for (const auto& [idx, dv] : mo.D) {
    for (int v = 1; v <= 7; ++v) {
      const double c = dv[v - 1];
      if (c == 0.0) continue;
      double prod = nf;
      for (int a = 0; a < 3 && prod != 0.0; ++a) {
        const double t = point[a] / h - idx[a];
        prod *= ((v >> a) & 1) ? table.psi(t) : table.phi(t);
      }
      value += c * prod;
    }
  }
  return value;
}

double mo_inner_product(const WaveletMO& a, const WaveletMO& b) {
  if (!(a.grid == b.grid)) throw Error("incompatible grids");
  double acc = 0.0;
  for (const auto& [i, s] : a.S) {
    auto it = b.S.find(i);
    if (it != b.S.end()) acc += s * it->second;
  }
  for (const auto& [i, d] : a.D) {
    auto it = b.D.find(i);
    if (it == b.D.end()) continue;
    for (int v = 0; v < 7; ++v) acc += d[v] * it->second[v];
  }
  return acc;
}

void export_mo(std::ostream& out, const WaveletMO& mo, int order) {
  out.precision(17);
  GridIndex lo = {0, 0, 0}, hi = {0, 0, 0};
  bool first = true;
  auto extend = [&](const GridIndex& i) {
    for (int a = 0; a < 3; ++a) {
      if (first || i[a] < lo[a]) lo[a] = i[a];
      if (first || i[a] > hi[a]) hi[a] = i[a];
    }
    first = false;
  };
  for (const auto& [i, s] : mo.S) extend(i);
  for (const auto& i : mo.grid.coarse) extend(i);
  for (const auto& i : mo.grid.fine) extend(i);
  out << "WAVELETMO 1\n";
  out << "order " << order << "\n";
  out << "spacing " << mo.grid.spacing_fine << " "
      << mo.grid.spacing_coarse() << "\n";
  out << "extent " << lo[0] << " " << hi[0] << " " << lo[1] << " " << hi[1]
      << " " << lo[2] << " " << hi[2] << "\n";
  for (const auto& [i, s] : mo.S)
    out << "S " << i[0] << " " << i[1] << " " << i[2] << " " << s << "\n";
  // every fine index emits all seven components so the region round-trips
  for (const auto& i : mo.grid.fine) {
    std::array<double, 7> d{};
    auto it = mo.D.find(i);
    if (it != mo.D.end()) d = it->second;
    for (int v = 1; v <= 7; ++v)
      out << "D " << i[0] << " " << i[1] << " " << i[2] << " " << v << " "
          << d[v - 1] << "\n";
  }
}

std::pair<WaveletMO, int> import_mo(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "WAVELETMO" || version != 1)
    throw Error("import_mo: bad header");
  std::string key;
  int order = 0;
  double h = 0, hc = 0;
  if (!(in >> key >> order) || key != "order")
    throw Error("import_mo: missing order");
  if (!(in >> key >> h >> hc) || key != "spacing")
    throw Error("import_mo: missing spacing");
  GridIndex lo, hi;
  if (!(in >> key >> lo[0] >> hi[0] >> lo[1] >> hi[1] >> lo[2] >> hi[2]) ||
      key != "extent")
    throw Error("import_mo: missing extent");
  WaveletMO mo;
  std::set<GridIndex> fine;
  std::string tag;
  while (in >> tag) {
    GridIndex i;
    if (tag == "S") {
      double s;
      if (!(in >> i[0] >> i[1] >> i[2] >> s))
        throw Error("import_mo: bad S record");
      mo.S[i] = s;
    } else if (tag == "D") {
      int v;
      double d;
      if (!(in >> i[0] >> i[1] >> i[2] >> v >> d) || v < 1 || v > 7)
        throw Error("import_mo: bad D record");
      fine.insert(i);
      auto& arr = mo.D[i];
      arr[v - 1] = d;
    } else {
      throw Error("import_mo: unknown record '" + tag + "'");
    }
  }
  std::set<GridIndex> coarse;
  for (const auto& [i, s] : mo.S)
    if (!fine.count(i)) coarse.insert(i);
  mo.grid = DualGrid(h, std::move(coarse), std::move(fine));
  return {std::move(mo), order};
}

}  // namespace wavemol
