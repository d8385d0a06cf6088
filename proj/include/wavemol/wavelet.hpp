#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wavemol/common.hpp"

namespace wavemol {

/// Order-m Daubechies filter pair. Coefficients are indexed j = 1-m .. m
/// (stored at vector position j + m - 1) so that the refinement relation
/// phi(x) = sqrt(2) sum_j h_j phi(2x - j) gives phi support [1-m, m].
struct WaveletFilter {
  int order = 0;
  std::vector<double> h;  // low-pass, 2m taps
  std::vector<double> g;  // high-pass, g_j = (-1)^j h_{1-j}

  double h_at(int j) const { return h[j + order - 1]; }
  double g_at(int j) const { return g[j + order - 1]; }
  int j_min() const { return 1 - order; }
  int j_max() const { return order; }
};

/// Supported orders: 2, 4, 8 (embedded constant tables).
WaveletFilter build_filter(int order);

/// phi and psi tabulated on the dyadic grid k / 2^level over [1-m, m].
class DyadicFunctionTable {
 public:
  DyadicFunctionTable(WaveletFilter filter, int level,
                      std::vector<double> phi, std::vector<double> psi)
      : filter_(std::move(filter)), level_(level), phi_(std::move(phi)),
        psi_(std::move(psi)) {}

  const WaveletFilter& filter() const { return filter_; }
  int level() const { return level_; }
  std::size_t table_size() const { return phi_.size(); }

  /// Value at the tabulated dyadic point index k (x = 1-m + k/2^level).
  double phi_index(std::int64_t k) const {
    return (k < 0 || k >= std::int64_t(phi_.size())) ? 0.0 : phi_[k];
  }
  double psi_index(std::int64_t k) const {
    return (k < 0 || k >= std::int64_t(psi_.size())) ? 0.0 : psi_[k];
  }
  /// Pointwise evaluation; non-dyadic x linearly interpolated, zero outside
  /// the support.
  double phi(double x) const;
  double psi(double x) const;

 private:
  double interp(const std::vector<double>& v, double x) const;
  WaveletFilter filter_;
  int level_;
  std::vector<double> phi_, psi_;
};

/// phi at the integers from the eigenvalue-1 eigenvector of the refinement
/// matrix, then refined to the requested dyadic level.
DyadicFunctionTable evaluate_cascade(const WaveletFilter& filter, int level);

using GridIndex = std::array<int, 3>;

/// Dual-resolution grid: a coarse region with spacing h' = 2h holding
/// scaling functions only, and a fine region with spacing h augmented by the
/// seven tensor-product wavelets. Regions are caller-specified index sets.
struct DualGrid {
  double spacing_fine = 0.0;  // h; coarse spacing is 2h
  std::set<GridIndex> coarse;
  std::set<GridIndex> fine;

  DualGrid() = default;
  DualGrid(double h, std::set<GridIndex> coarse_idx, std::set<GridIndex> fine_idx);
  double spacing_coarse() const { return 2.0 * spacing_fine; }
  bool operator==(const DualGrid& o) const {
    return spacing_fine == o.spacing_fine && coarse == o.coarse && fine == o.fine;
  }
};

/// Molecular orbital expanded per the dual-resolution basis: one scaling
/// coefficient S per grid index, seven wavelet coefficients D^v (v = 1..7)
/// per fine-region index. Component v uses psi on axis a when bit a of v is
/// set (v=1 -> psi(x)phi(y)phi(z)).
struct WaveletMO {
  DualGrid grid;
  std::map<GridIndex, double> S;
  std::map<GridIndex, std::array<double, 7>> D;

  double norm_squared() const;
};

/// Eq.-(5)-style superposition value at a 3D point. Basis functions are
/// L2-normalized (spacing^{-3/2} prefactor per tensor product). Points
/// outside every support return zero.
double synthesize_mo(const WaveletMO& mo, const std::array<double, 3>& point,
                     const DyadicFunctionTable& table);

/// Coefficient dot product; exact inner product in the orthonormal basis.
double mo_inner_product(const WaveletMO& a, const WaveletMO& b);

/// Structured-text round trip: header (order, spacings, index extents),
/// then `S i j k value` and `D i j k v value` records. All seven D
/// components of every fine index are written so the region classification
/// survives the round trip.
void export_mo(std::ostream& out, const WaveletMO& mo, int order);
std::pair<WaveletMO, int> import_mo(std::istream& in);

}  // namespace wavemol
