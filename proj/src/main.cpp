// Command-line front end: declarative JSON configs driving PES scans, VQE
// runs, vibrational fits, NPE, and noisy/mitigated evaluations.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavemol/analysis.hpp"
#include "wavemol/ansatz.hpp"
#include "wavemol/integrals.hpp"
#include "wavemol/mapping.hpp"
#include "wavemol/mitigation.hpp"
#include "wavemol/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wavemol;

namespace {

constexpr const char* kVersion = "wavemol 1.0.0";

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing";
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  char c;
  while (in.get(c)) {
    h ^= std::uint8_t(c);
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

struct FixturePoint {
  double geometry = 0.0;
  double angle = 0.0;
  bool has_angle = false;
  std::string path;
};

std::vector<FixturePoint> load_fixture_set(const std::string& dir) {
  std::vector<FixturePoint> points;
  if (!fs::is_directory(dir)) throw Error("fixture directory not found: " + dir);
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".fcidump") continue;
    FixturePoint p;
    p.path = e.path().string();
    const std::string meta = e.path().stem().string() + ".meta";
    std::ifstream m(e.path().parent_path() / meta);
    std::string key;
    while (m >> key) {
      if (key == "geometry_param_angstrom") m >> p.geometry;
      else if (key == "geometry_param_angle_deg") {
        m >> p.angle;
        p.has_angle = true;
      } else {
        std::string rest;
        std::getline(m, rest);
      }
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw Error("no .fcidump fixtures in " + dir);
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return std::tie(a.geometry, a.angle) < std::tie(b.geometry, b.angle);
  });
  return points;
}

MolecularIntegrals load_with_active_space(const std::string& path,
                                          const json& cfg) {
  MolecularIntegrals ints = load_fcidump(path);
  if (cfg.contains("active_space")) {
    ActiveSpace space;
    for (int f : cfg["active_space"].value("frozen", std::vector<int>{}))
      space.frozen_occupied.insert(f);
    for (int r : cfg["active_space"].value("removed", std::vector<int>{}))
      space.removed_virtual.insert(r);
    ints = apply_active_space(ints, space);
  }
  return ints;
}

void provenance(std::ostream& out, const std::string& config_path,
                const std::vector<std::string>& fixture_paths) {
  out << "# " << kVersion << "\n";
  out << "# config " << file_hash(config_path) << "\n";
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& p : fixture_paths)
    for (char c : file_hash(p)) {
      h ^= std::uint8_t(c);
      h *= 1099511628211ull;
    }
  out << "# fixtures " << std::hex << h << std::dec << "\n";
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(std::string("config parse error: ") + e.what());
  }
  return j;
}

void validate_config(const json& cfg) {
  const std::string backend = cfg.value("backend", "exact");
  if (backend == "noisy" && !cfg.contains("noise_file"))
    throw Error("config field 'noise_file' required for the noisy backend");
  if ((backend == "sampled" || backend == "noisy") &&
      (!cfg.contains("shots") || !cfg.contains("seed")))
    throw Error("config fields 'shots' and 'seed' required for backend '" +
                backend + "'");
}

// Energy method over a fixture set with warm-started VQE.
struct EnergyMethod {
  std::string method;   // fci | vqe-uccsd | vqe-heuristic
  std::string mapping;  // jw | parity-tapered
  json cfg;
  std::vector<double> warm;

  PesPoint evaluate(const std::string& path) {
    const MolecularIntegrals ints = load_with_active_space(path, cfg);
    if (method == "fci") return {fci_solve(ints).ground_energy(), 0.0};

    const FermionHamiltonian fh = to_fermion_hamiltonian(ints);
    QubitMapping map =
        mapping == "jw"
            ? QubitMapping::jordan_wigner(fh.n_modes)
            : QubitMapping::parity_tapered(fh.n_modes, ints.n_electrons,
                                           ints.spin_multiplicity_2ms);
    const PauliSum h = map.map_hamiltonian(fh);
    VqeProblem p;
    p.hamiltonian = h;
    if (method == "vqe-uccsd") {
      const UccsdSpec spec = make_uccsd_spec(ints);
      p.ansatz = build_uccsd(spec, map);
      p.initial.assign(p.ansatz.n_params(), 0.0);
      int k = 0;
      for (const auto& ex : spec.excitations)
        if (k < p.ansatz.n_params() && ex.from.size() == 2)
          p.initial[k++] = ex.mp2_amplitude;
      if (!warm.empty() && warm.size() == p.initial.size()) p.initial = warm;
      const VqeResult r = vqe_minimize(p);
      warm = r.parameters;
      return {r.energy, 0.0};
    }
    if (method == "vqe-heuristic") {
      p.ansatz = build_heuristic(h.n_qubits(), cfg.value("layers", 1));
      p.initial.assign(p.ansatz.n_params(), 0.0);
      p.lower_bounds = std::vector<double>(p.initial.size(), -3.14159265);
      p.upper_bounds = std::vector<double>(p.initial.size(), 3.14159265);
      VqeResult r;
      if (!warm.empty() && warm.size() == p.initial.size()) {
        p.initial = warm;
        r = vqe_minimize(p);
      } else {
        r = vqe_multistart(p, 8, cfg.value("seed", 0));
      }
      warm = r.parameters;
      return {r.energy, 0.0};
    }
    throw Error("unknown method '" + method + "'");
  }
};

int cmd_inspect(const std::string& path) {
  const MolecularIntegrals ints = load_fcidump(path);
  const FermionHamiltonian fh = to_fermion_hamiltonian(ints);
  const PauliSum parity_h = parity_map(fh);
  std::cout << path << ": " << ints.n_spatial << " spatial orbitals, "
            << ints.n_electrons << " electrons, e_nuclear " << ints.e_nuclear
            << "\n";
  std::cout << fh.n_modes << " spin orbitals -> " << parity_h.n_qubits()
            << " qubits (parity), " << fh.n_modes - 2 << " qubits (tapered)\n";
  const auto [tapered, info] =
      taper_z2(parity_h, ints.n_electrons, ints.spin_multiplicity_2ms);
  std::cout << "Pauli terms: " << parity_h.size() << " (parity), "
            << tapered.size() << " (tapered)\n";
  return 0;
}

int cmd_scan(const std::string& config_path, bool do_fit) {
  const json cfg = read_config(config_path);
  validate_config(cfg);
  const auto fixtures = load_fixture_set(cfg.at("fixture_dir"));
  EnergyMethod em{cfg.value("method", "fci"),
                  cfg.value("mapping", "parity-tapered"), cfg, {}};
  std::vector<double> geoms;
  std::vector<std::string> paths;
  for (const auto& f : fixtures) {
    geoms.push_back(f.geometry);
    paths.push_back(f.path);
  }
  const PesCurve curve = scan_pes(
      geoms, [&](int i) { return em.evaluate(paths[i]); },
      cfg.value("label", em.method));
  const std::string out_dir = cfg.value("output_dir", ".");
  fs::create_directories(out_dir);
  const std::string out_path = out_dir + "/curve.csv";
  std::ofstream out(out_path);
  provenance(out, config_path, paths);
  write_curve_csv(out, curve);
  std::cout << "wrote " << out_path << " (" << curve.geometry.size()
            << " points)\n";
  if (do_fit && cfg.contains("masses")) {
    const std::vector<double> masses = cfg["masses"];
    const VibrationalResult v = fit_equilibrium(curve, masses.at(0), masses.at(1));
    std::cout.precision(12);
    std::cout << "summary," << curve.label << "," << v.r_eq << ","
              << v.omega_cm1 << "\n";
  }
  return 0;
}

PesCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open curve: " + path);
  PesCurve c;
  std::string line;
  bool any_err = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("geometry", 0) == 0)
      continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() < 2) throw Error("bad curve row: " + line);
    c.geometry.push_back(vals[0]);
    c.energy.push_back(vals[1]);
    c.std_error.push_back(vals.size() > 2 ? vals[2] : 0.0);
    if (vals.size() > 2 && vals[2] > 0) any_err = true;
  }
  if (!any_err) c.std_error.clear();
  c.validate();
  return c;
}

int cmd_fit(const std::string& curve_path, double mass_a, double mass_b) {
  const PesCurve c = read_curve_csv(curve_path);
  const VibrationalResult v = fit_equilibrium(c, mass_a, mass_b);
  std::cout.precision(12);
  std::cout << "r_eq_angstrom," << v.r_eq << "\n";
  std::cout << "omega_cm1," << v.omega_cm1 << "\n";
  std::cout << "force_constant_ha_per_a2," << v.force_constant << "\n";
  std::cout << "reduced_mass_amu," << v.reduced_mass << "\n";
  return 0;
}

int cmd_npe(const std::string& curve_path, const std::string& ref_path) {
  const double npe =
      nonparallelity_error_mha(read_curve_csv(curve_path), read_curve_csv(ref_path));
  std::cout.precision(12);
  std::cout << "npe_mha," << npe << "\n";
  return 0;
}

int cmd_mitigate(const std::string& config_path) {
  const json cfg = read_config(config_path);
  validate_config(cfg);
  if (!cfg.contains("noise_file"))
    throw Error("config field 'noise_file' required for mitigate");
  NoiseModel noise = NoiseModel::from_json_file(cfg.at("noise_file"));
  const std::string convention = cfg.value("noise_convention", "total");
  if (convention == "excess")
    noise = noise.excess_depolarizing();
  else if (convention != "total")
    throw Error("config field 'noise_convention' must be 'total' or 'excess'");
  const std::string fixture = cfg.at("fixture_file");
  const MolecularIntegrals ints = load_with_active_space(fixture, cfg);
  const FermionHamiltonian fh = to_fermion_hamiltonian(ints);
  const QubitMapping map = QubitMapping::parity_tapered(
      fh.n_modes, ints.n_electrons, ints.spin_multiplicity_2ms);
  // Noisy runs use the frame in which the reference determinant is |0...0>.
  const std::uint64_t occ = (1ull << ints.n_electrons) - 1;
  const PauliSum h =
      x_conjugate(map.map_hamiltonian(fh), map.reference_bits(occ));
  const std::vector<int> assignment = cfg.at("assignment");
  const long shots = cfg.value("shots", 10000);
  const std::uint64_t seed = cfg.value("seed", 0);

  Circuit ansatz = build_heuristic(h.n_qubits(), cfg.value("layers", 1));
  Circuit native = compile_native(ansatz);
  VqeProblem p;
  p.hamiltonian = h;
  p.ansatz = native;
  p.initial.assign(native.n_params(), 0.0);
  p.lower_bounds = std::vector<double>(p.initial.size(), -3.14159265);
  p.upper_bounds = std::vector<double>(p.initial.size(), 3.14159265);
  p.backend = BackendKind::Noisy;
  p.noise = &noise;
  p.assignment = assignment;
  const VqeResult opt = vqe_multistart(p, 8, seed);

  const std::vector<int> folds = cfg.value("folds", std::vector<int>{1, 3, 5});
  const int reps = cfg.value("repetitions", 10);
  const MitigatedPoint mp = run_mitigated_vqe_point(
      h, native, opt.parameters, noise, assignment, folds, shots, reps, seed);

  const std::string out_dir = cfg.value("output_dir", ".");
  fs::create_directories(out_dir);
  const std::string out_path = out_dir + "/mitigation.csv";
  std::ofstream out(out_path);
  provenance(out, config_path, {fixture});
  out.precision(12);
  out << "fold,repetition,energy,stderr\n";
  for (std::size_t fi = 0; fi < mp.series.size(); ++fi)
    for (std::size_t r = 0; r < mp.repetition_energies[fi].size(); ++r)
      out << mp.series[fi].fold << "," << r << ","
          << mp.repetition_energies[fi][r] << "," << mp.series[fi].std_error
          << "\n";
  out << "summary,," << mp.mitigated << "," << mp.ci95 << "\n";
  const QuantumState zero_noise_state = run_statevector(native, opt.parameters);
  std::cout.precision(12);
  std::cout << "raw," << mp.raw << "\n";
  std::cout << "mitigated," << mp.mitigated << "\n";
  std::cout << "ci95," << mp.ci95 << "\n";
  std::cout << "zero_noise," << expectation_exact(zero_noise_state, h) << "\n";
  std::cout << "exact," << qubit_ground_energy(h) << "\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-chemistry VQE toolkit"};
  app.require_subcommand(1);

  std::string fixture_path, config_path, curve_path, ref_path;
  double mass_a = 0, mass_b = 0;

  auto* inspect = app.add_subcommand("inspect", "Report a FCIDUMP fixture");
  inspect->add_option("fixture", fixture_path)->required();

  auto* run = app.add_subcommand("run", "Scan + fit per the config");
  run->add_option("--config", config_path)->required();

  auto* scan = app.add_subcommand("scan", "PES scan per the config");
  scan->add_option("--config", config_path)->required();

  auto* fit = app.add_subcommand("fit", "Vibrational fit of a curve CSV");
  fit->add_option("--curve", curve_path)->required();
  fit->add_option("--mass-a", mass_a)->required();
  fit->add_option("--mass-b", mass_b)->required();

  auto* npe = app.add_subcommand("npe", "Nonparallelity error of two curves");
  npe->add_option("--curve", curve_path)->required();
  npe->add_option("--reference", ref_path)->required();

  auto* mitigate =
      app.add_subcommand("mitigate", "Noisy + mitigated point per the config");
  mitigate->add_option("--config", config_path)->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (inspect->parsed()) return cmd_inspect(fixture_path);
    if (run->parsed()) return cmd_scan(config_path, true);
    if (scan->parsed()) return cmd_scan(config_path, false);
    if (fit->parsed()) return cmd_fit(curve_path, mass_a, mass_b);
    if (npe->parsed()) return cmd_npe(curve_path, ref_path);
    if (mitigate->parsed()) return cmd_mitigate(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
