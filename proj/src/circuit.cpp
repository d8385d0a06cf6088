#include "wavemol/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>

#include "wavemol/backend.hpp"

namespace wavemol {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

void Circuit::append(Gate g) {
  if (g.qubits.empty()) throw Error("Circuit: gate needs target qubits");
  for (int q : g.qubits)
    if (q < 0 || q >= n_qubits_) throw Error("Circuit: qubit index out of range");
  switch (g.kind) {
    case GateKind::CNOT:
      if (g.qubits.size() != 2 || g.qubits[0] == g.qubits[1])
        throw Error("Circuit: CNOT needs two distinct qubits");
      break;
    case GateKind::PauliEvolution:
      if (!g.pauli) throw Error("Circuit: PauliEvolution needs a generator");
      break;
    default:
      if (g.qubits.size() != 1)
        throw Error("Circuit: single-qubit gate with multiple targets");
  }
  if (g.param_index >= n_params_)
    throw Error("Circuit: parameter index out of range");
  gates_.push_back(std::move(g));
}

int Circuit::count_kind(GateKind k) const {
  return int(std::count_if(gates_.begin(), gates_.end(),
                           [k](const Gate& g) { return g.kind == k; }));
}

Eigen::MatrixXcd Circuit::unitary(const std::vector<double>& params) const {
  if (n_qubits_ > 10) throw Error("Circuit::unitary: size cap exceeded");
  if (int(params.size()) != n_params_)
    throw Error("Circuit::unitary: parameter count mismatch");
  const std::uint64_t dim = 1ull << n_qubits_;
  Eigen::MatrixXcd u(dim, dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi[col] = 1.0;
    for (const Gate& g : gates_) apply_gate_statevector(psi, g, g.angle(params));
    u.col(col) = psi;
  }
  return u;
}

std::string Circuit::serialize() const {
  std::ostringstream os;
  os.precision(17);
  os << "CIRCUIT " << n_qubits_ << " " << n_params_ << "\n";
  for (const Gate& g : gates_) {
    switch (g.kind) {
      case GateKind::RX: os << "RX"; break;
      case GateKind::RY: os << "RY"; break;
      case GateKind::RZ: os << "RZ"; break;
      case GateKind::H: os << "H"; break;
      case GateKind::X: os << "X"; break;
      case GateKind::CNOT: os << "CNOT"; break;
      case GateKind::PauliEvolution: os << "PEVO"; break;
    }
    os << " ";
    for (std::size_t i = 0; i < g.qubits.size(); ++i)
      os << (i ? "," : "") << g.qubits[i];
    if (g.kind != GateKind::H && g.kind != GateKind::X &&
        g.kind != GateKind::CNOT) {
      if (g.param_index >= 0)
        os << " p" << g.param_index << "*" << g.coeff;
      else
        os << " " << g.coeff;
    }
    if (g.pauli) os << " " << g.pauli->label();
    os << "\n";
  }
  return os.str();
}

Circuit Circuit::deserialize(std::istream& in) {
  std::string magic;
  int nq = 0, np = 0;
  if (!(in >> magic >> nq >> np) || magic != "CIRCUIT")
    throw Error("Circuit: bad serialization header");
  Circuit c(nq, np);
  std::string kind;
  while (in >> kind) {
    Gate g;
    if (kind == "RX") g.kind = GateKind::RX;
    else if (kind == "RY") g.kind = GateKind::RY;
    else if (kind == "RZ") g.kind = GateKind::RZ;
    else if (kind == "H") g.kind = GateKind::H;
    else if (kind == "X") g.kind = GateKind::X;
    else if (kind == "CNOT") g.kind = GateKind::CNOT;
    else if (kind == "PEVO") g.kind = GateKind::PauliEvolution;
    else throw Error("Circuit: unknown gate kind '" + kind + "'");
    std::string qs;
    in >> qs;
    std::istringstream qss(qs);
    std::string tok;
    while (std::getline(qss, tok, ',')) g.qubits.push_back(std::stoi(tok));
    if (g.kind != GateKind::H && g.kind != GateKind::X &&
        g.kind != GateKind::CNOT) {
      std::string bind;
      in >> bind;
      if (!bind.empty() && bind[0] == 'p') {
        auto star = bind.find('*');
        g.param_index = std::stoi(bind.substr(1, star - 1));
        g.coeff = std::stod(bind.substr(star + 1));
      } else {
        g.coeff = std::stod(bind);
      }
    }
    if (g.kind == GateKind::PauliEvolution) {
      std::string label;
      in >> label;
      g.pauli = PauliString::from_label(label);
    }
    c.append(std::move(g));
  }
  return c;
}

Circuit compile_native(const Circuit& c) {
  Circuit out(c.n_qubits(), c.n_params());
  auto fixed = [](GateKind k, int q, double angle) {
    Gate g;
    g.kind = k;
    g.qubits = {q};
    g.coeff = angle;
    return g;
  };
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::X:
        out.append(fixed(GateKind::RX, g.qubits[0], std::numbers::pi));
        break;
      case GateKind::PauliEvolution: {
        const PauliString& p = *g.pauli;
        std::vector<int> active;
        for (int q = 0; q < p.n_qubits; ++q)
          if (p.pauli_at(q) != 'I') active.push_back(q);
        if (active.empty()) break;  // global phase only
        // basis change V with V P V^dag = Z...Z
        for (int q : active) {
          const char axis = p.pauli_at(q);
          if (axis == 'X') {
            out.append(fixed(GateKind::H, q, 0.0));
          } else if (axis == 'Y') {
            out.append(fixed(GateKind::RZ, q, -kHalfPi));  // S^dag
            out.append(fixed(GateKind::H, q, 0.0));
          }
        }
        for (std::size_t i = 0; i + 1 < active.size(); ++i) {
          Gate cx;
          cx.kind = GateKind::CNOT;
          cx.qubits = {active[i], active[i + 1]};
          out.append(cx);
        }
        Gate rz;
        rz.kind = GateKind::RZ;
        rz.qubits = {active.back()};
        rz.param_index = g.param_index;
        rz.coeff = g.coeff;
        out.append(rz);
        for (std::size_t i = active.size() - 1; i-- > 0;) {
          Gate cx;
          cx.kind = GateKind::CNOT;
          cx.qubits = {active[i], active[i + 1]};
          out.append(cx);
        }
        for (auto it = active.rbegin(); it != active.rend(); ++it) {
          const char axis = p.pauli_at(*it);
          if (axis == 'X') {
            out.append(fixed(GateKind::H, *it, 0.0));
          } else if (axis == 'Y') {
            out.append(fixed(GateKind::H, *it, 0.0));
            out.append(fixed(GateKind::RZ, *it, kHalfPi));  // S
          }
        }
        break;
      }
      default:
        out.append(g);
    }
  }
  return out;
}

Circuit fold_cnots(const Circuit& c, int factor) {
  if (factor < 1 || factor % 2 == 0)
    throw Error("fold_cnots: factor must be a positive odd integer");
  Circuit out(c.n_qubits(), c.n_params());
  for (const Gate& g : c.gates()) {
    const int reps = g.kind == GateKind::CNOT ? factor : 1;
    for (int r = 0; r < reps; ++r) out.append(g);
  }
  return out;
}

}  // namespace wavemol
