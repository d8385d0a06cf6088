#include "wavemol/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace wavemol {

void PesCurve::validate() const {
  if (geometry.size() != energy.size() || geometry.empty())
    throw Error("PesCurve: geometry/energy size mismatch");
  if (!std_error.empty() && std_error.size() != energy.size())
    throw Error("PesCurve: uncertainty size mismatch");
  for (std::size_t i = 1; i < geometry.size(); ++i)
    if (geometry[i] <= geometry[i - 1])
      throw Error("PesCurve: geometry values must be strictly increasing");
  for (double e : energy)
    if (!std::isfinite(e)) throw Error("PesCurve: non-finite energy");
}

PesCurve scan_pes(const std::vector<double>& geometries,
                  const std::function<PesPoint(int)>& method,
                  const std::string& label) {
  PesCurve c;
  c.label = label;
  c.geometry = geometries;
  bool any_err = false;
  for (std::size_t i = 0; i < geometries.size(); ++i) {
    const PesPoint p = method(int(i));
    c.energy.push_back(p.energy);
    c.std_error.push_back(p.std_error);
    if (p.std_error > 0) any_err = true;
  }
  if (!any_err) c.std_error.clear();
  c.validate();
  return c;
}

VibrationalResult fit_equilibrium(const PesCurve& curve, double mass_a_amu,
                                  double mass_b_amu) {
  curve.validate();
  const int n = int(curve.geometry.size());
  if (n < 7) throw Error("fit_equilibrium: need at least 7 points");
  int imin = 0;
  for (int i = 1; i < n; ++i)
    if (curve.energy[i] < curve.energy[imin]) imin = i;
  if (imin == 0 || imin == n - 1) throw Error("minimum not bracketed");

  // 7 points nearest the discrete minimum (window clipped at the ends)
  int lo = std::max(0, imin - 3);
  int hi = lo + 7;
  if (hi > n) {
    hi = n;
    lo = n - 7;
  }
  Eigen::MatrixXd a(7, 5);
  Eigen::VectorXd b(7);
  const double r0 = curve.geometry[imin];
  for (int i = 0; i < 7; ++i) {
    const double x = curve.geometry[lo + i] - r0;
    double pw = 1.0;
    for (int k = 0; k < 5; ++k) {
      a(i, k) = pw;
      pw *= x;
    }
    b[i] = curve.energy[lo + i];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd resid = a * c - b;

  // minimum of the quartic: Newton from x = 0
  auto d1 = [&](double x) {
    return c[1] + 2 * c[2] * x + 3 * c[3] * x * x + 4 * c[4] * x * x * x;
  };
  auto d2 = [&](double x) { return 2 * c[2] + 6 * c[3] * x + 12 * c[4] * x * x; };
  double x = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double g = d1(x), h = d2(x);
    if (h <= 0) break;
    const double step = g / h;
    x -= step;
    if (std::abs(step) < 1e-14) break;
  }
  const double k = d2(x);
  if (k <= 0) throw Error("saddle or noise");
  const double half_window =
      curve.geometry[hi - 1] - curve.geometry[lo];
  if (std::abs(x) > half_window) throw Error("minimum not bracketed");

  VibrationalResult res;
  res.r_eq = r0 + x;
  res.force_constant = k;
  res.reduced_mass = mass_a_amu * mass_b_amu / (mass_a_amu + mass_b_amu);
  res.fit_residual = std::sqrt(resid.squaredNorm() / 7.0);
  // k [Ha/A^2] -> SI: * hartree_joule / (1e-10 m)^2; omega = sqrt(k/mu)
  const double k_si = k * constants::hartree_joule * 1e20;
  const double mu_kg = res.reduced_mass * constants::amu_kg;
  const double omega_rad = std::sqrt(k_si / mu_kg);
  res.omega_cm1 = omega_rad / (2.0 * std::numbers::pi * constants::c_cm_per_s);
  return res;
}

double nonparallelity_error_mha(const PesCurve& curve,
                                const PesCurve& reference) {
  curve.validate();
  reference.validate();
  if (curve.geometry.size() != reference.geometry.size())
    throw Error("nonparallelity_error: geometry grids differ");
  for (std::size_t i = 0; i < curve.geometry.size(); ++i)
    if (std::abs(curve.geometry[i] - reference.geometry[i]) > 1e-9)
      throw Error("nonparallelity_error: geometry grids differ");
  double dmin = 0, dmax = 0;
  for (std::size_t i = 0; i < curve.energy.size(); ++i) {
    const double d = curve.energy[i] - reference.energy[i];
    if (i == 0 || d < dmin) dmin = d;
    if (i == 0 || d > dmax) dmax = d;
  }
  return (dmax - dmin) * 1000.0;
}

Pes2dResult scan_pes_2d(const std::vector<double>& r_values,
                        const std::vector<double>& angle_values,
                        const std::function<double(int, int)>& method) {
  if (r_values.size() < 3 || angle_values.size() < 3)
    throw Error("scan_pes_2d: grid too small");
  Pes2dResult res;
  res.r_values = r_values;
  res.angle_values = angle_values;
  const int nr = int(r_values.size()), na = int(angle_values.size());
  res.energy.resize(nr, na);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < na; ++j) res.energy(i, j) = method(i, j);

  int imin = 0, jmin = 0;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < na; ++j)
      if (res.energy(i, j) < res.energy(imin, jmin)) {
        imin = i;
        jmin = j;
      }
  if (imin == 0 || imin == nr - 1 || jmin == 0 || jmin == na - 1)
    throw Error("scan_pes_2d: minimum on grid boundary");

  // paraboloid E = a + b r + c t + d r^2 + e t^2 + f r t on the 3x3 patch
  Eigen::MatrixXd m(9, 6);
  Eigen::VectorXd y(9);
  int row = 0;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      const double r = r_values[imin + di] - r_values[imin];
      const double t = angle_values[jmin + dj] - angle_values[jmin];
      m.row(row) << 1.0, r, t, r * r, t * t, r * t;
      y[row] = res.energy(imin + di, jmin + dj);
      ++row;
    }
  const Eigen::VectorXd c = m.colPivHouseholderQr().solve(y);
  // stationary point of the quadratic form
  Eigen::Matrix2d hess;
  hess << 2 * c[3], c[5], c[5], 2 * c[4];
  Eigen::Vector2d lin(c[1], c[2]);
  if (hess.determinant() <= 0) throw Error("scan_pes_2d: fit is not a minimum");
  const Eigen::Vector2d sol = -hess.inverse() * lin;
  res.r_min = r_values[imin] + sol[0];
  res.angle_min = angle_values[jmin] + sol[1];
  res.energy_min =
      c[0] + c[1] * sol[0] + c[2] * sol[1] + c[3] * sol[0] * sol[0] +
      c[4] * sol[1] * sol[1] + c[5] * sol[0] * sol[1];
  return res;
}

void write_curve_csv(std::ostream& out, const PesCurve& curve) {
  out.precision(12);
  out << "geometry,energy,stderr\n";
  for (std::size_t i = 0; i < curve.geometry.size(); ++i) {
    out << curve.geometry[i] << "," << curve.energy[i] << ","
        << (curve.std_error.empty() ? 0.0 : curve.std_error[i]) << "\n";
  }
}

void write_surface_csv(std::ostream& out, const Pes2dResult& surface,
                       bool shift_minimum_to_zero) {
  out.precision(12);
  out << "r,angle,energy\n";
  const double shift = shift_minimum_to_zero ? surface.energy_min : 0.0;
  for (std::size_t i = 0; i < surface.r_values.size(); ++i)
    for (std::size_t j = 0; j < surface.angle_values.size(); ++j)
      out << surface.r_values[i] << "," << surface.angle_values[j] << ","
          << surface.energy(i, j) - shift << "\n";
}

}  // namespace wavemol
