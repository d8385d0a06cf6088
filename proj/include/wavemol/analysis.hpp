#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wavemol/common.hpp"

namespace wavemol {

/// Geometry-parameterized energy samples with optional uncertainties.
struct PesCurve {
  std::vector<double> geometry;  // strictly increasing (angstrom or degrees)
  std::vector<double> energy;    // hartree
  std::vector<double> std_error; // empty or per-point
  std::string label;             // e.g. "STO-3G(2,2)/UCCSD"

  void validate() const;
};

struct VibrationalResult {
  double r_eq = 0.0;          // angstrom
  double omega_cm1 = 0.0;     // harmonic wavenumber
  double force_constant = 0.0;  // hartree / angstrom^2
  double reduced_mass = 0.0;  // amu
  double fit_residual = 0.0;  // rms over the fit window
};

struct PesPoint {
  double energy = 0.0;
  double std_error = 0.0;
};

/// Evaluate the supplied energy method over a geometry list. The callback
/// receives the point index (fixture lookup is the caller's concern);
/// warm-starting along the scan also lives in the callback's state.
PesCurve scan_pes(const std::vector<double>& geometries,
                  const std::function<PesPoint(int)>& method,
                  const std::string& label);

/// Quartic least-squares fit to the 7 points nearest the discrete minimum;
/// omega from the curvature at the fitted minimum.
VibrationalResult fit_equilibrium(const PesCurve& curve, double mass_a_amu,
                                  double mass_b_amu);

/// max(E - E_ref) - min(E - E_ref) in millihartree; grids must match exactly.
double nonparallelity_error_mha(const PesCurve& curve, const PesCurve& reference);

struct Pes2dResult {
  std::vector<double> r_values;
  std::vector<double> angle_values;
  Eigen::MatrixXd energy;  // [r_index, angle_index]
  double r_min = 0.0;
  double angle_min = 0.0;
  double energy_min = 0.0;
};

/// Rectangular (R, angle) scan; minimum refined with a 6-coefficient
/// paraboloid fit on the 3x3 neighborhood of the discrete minimum.
Pes2dResult scan_pes_2d(
    const std::vector<double>& r_values, const std::vector<double>& angle_values,
    const std::function<double(int, int)>& method);

/// CSV writers (12 significant digits, deterministic order).
void write_curve_csv(std::ostream& out, const PesCurve& curve);
void write_surface_csv(std::ostream& out, const Pes2dResult& surface,
                       bool shift_minimum_to_zero);

}  // namespace wavemol
