#include "wavemol/solver.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <random>

namespace wavemol {

namespace {

std::vector<double> project(const std::vector<double>& x,
                            const std::optional<std::vector<double>>& lo,
                            const std::optional<std::vector<double>>& hi) {
  std::vector<double> out = x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (lo) out[i] = std::max(out[i], (*lo)[i]);
    if (hi) out[i] = std::min(out[i], (*hi)[i]);
  }
  return out;
}

}  // namespace

MinimizeResult lbfgsb_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    const std::function<std::vector<double>(const std::vector<double>&)>& grad,
    std::vector<double> x0, const std::optional<std::vector<double>>& lo,
    const std::optional<std::vector<double>>& hi, int max_iterations,
    double tolerance) {
  const std::size_t n = x0.size();
  const int memory = 8;
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;

  MinimizeResult res;
  std::vector<double> x = project(x0, lo, hi);
  double fx = f(x);
  if (!std::isfinite(fx)) throw Error("optimizer: non-finite objective");
  std::vector<double> g = grad(x);
  res.trace.push_back(fx);

  for (int iter = 0; iter < max_iterations; ++iter) {
    // two-loop recursion for the search direction
    std::vector<double> q = g;
    std::vector<double> a(s_hist.size());
    for (int i = int(s_hist.size()) - 1; i >= 0; --i) {
      double dot = 0;
      for (std::size_t k = 0; k < n; ++k) dot += s_hist[i][k] * q[k];
      a[i] = rho_hist[i] * dot;
      for (std::size_t k = 0; k < n; ++k) q[k] -= a[i] * y_hist[i][k];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) {
      double sy = 0, yy = 0;
      const auto& s_l = s_hist.back();
      const auto& y_l = y_hist.back();
      for (std::size_t k = 0; k < n; ++k) {
        sy += s_l[k] * y_l[k];
        yy += y_l[k] * y_l[k];
      }
      if (yy > 0) gamma = sy / yy;
    }
    for (std::size_t k = 0; k < n; ++k) q[k] *= gamma;
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      double dot = 0;
      for (std::size_t k = 0; k < n; ++k) dot += y_hist[i][k] * q[k];
      const double b = rho_hist[i] * dot;
      for (std::size_t k = 0; k < n; ++k) q[k] += (a[i] - b) * s_hist[i][k];
    }
    // descent direction -q; backtracking line search with projection
    double step = 1.0;
    double gd = 0;
    for (std::size_t k = 0; k < n; ++k) gd += g[k] * q[k];
    if (gd <= 0) {
      // fall back to steepest descent
      q = g;
      gd = 0;
      for (std::size_t k = 0; k < n; ++k) gd += g[k] * g[k];
      if (gd == 0) break;
    }
    std::vector<double> x_new;
    double f_new = fx;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      std::vector<double> cand(n);
      for (std::size_t k = 0; k < n; ++k) cand[k] = x[k] - step * q[k];
      cand = project(cand, lo, hi);
      const double fc = f(cand);
      if (!std::isfinite(fc)) throw Error("optimizer: non-finite objective");
      double desc = 0;
      for (std::size_t k = 0; k < n; ++k) desc += g[k] * (x[k] - cand[k]);
      if (fc <= fx - 1e-4 * desc || fc < fx - 1e-16) {
        x_new = std::move(cand);
        f_new = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++res.iterations;
    if (!accepted) {
      res.converged = true;  // no further descent possible
      break;
    }
    std::vector<double> g_new = grad(x_new);
    std::vector<double> s_vec(n), y_vec(n);
    double sy = 0;
    for (std::size_t k = 0; k < n; ++k) {
      s_vec[k] = x_new[k] - x[k];
      y_vec[k] = g_new[k] - g[k];
      sy += s_vec[k] * y_vec[k];
    }
    if (sy > 1e-14) {
      s_hist.push_back(std::move(s_vec));
      y_hist.push_back(std::move(y_vec));
      rho_hist.push_back(1.0 / sy);
      if (int(s_hist.size()) > memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double delta = fx - f_new;
    x = std::move(x_new);
    fx = f_new;
    g = std::move(g_new);
    res.trace.push_back(fx);
    if (delta < tolerance) {
      res.converged = true;
      break;
    }
  }
  res.value = fx;
  res.x = std::move(x);
  return res;
}

namespace {

double evaluate_energy(const VqeProblem& p, const std::vector<double>& theta) {
  switch (p.backend) {
    case BackendKind::Exact: {
      const QuantumState s = run_statevector(p.ansatz, theta);
      return expectation_exact(s, p.hamiltonian);
    }
    case BackendKind::Sampled:
      return expectation_sampled(p.ansatz, theta, p.hamiltonian, p.shots,
                                 p.seed)
          .value;
    case BackendKind::Noisy: {
      if (!p.noise) throw Error("vqe_minimize: noisy backend needs a model");
      const QuantumState rho =
          run_noisy(p.ansatz, theta, *p.noise, p.assignment);
      return expectation_exact(rho, p.hamiltonian);
    }
  }
  throw Error("vqe_minimize: unknown backend");
}

}  // namespace

VqeResult vqe_minimize(const VqeProblem& p) {
  if (p.ansatz.n_qubits() != p.hamiltonian.n_qubits())
    throw Error("vqe_minimize: ansatz/Hamiltonian qubit mismatch");
  if (int(p.initial.size()) != p.ansatz.n_params())
    throw Error("vqe_minimize: initial parameter count mismatch");

  // classify parameters: single-rotation-gate parameters get parameter-shift
  std::vector<int> gate_of_param(p.ansatz.n_params(), -1);
  std::vector<int> uses(p.ansatz.n_params(), 0);
  const auto& gates = p.ansatz.gates();
  for (std::size_t gi = 0; gi < gates.size(); ++gi)
    if (gates[gi].param_index >= 0) {
      ++uses[gates[gi].param_index];
      gate_of_param[gates[gi].param_index] = int(gi);
    }
  auto shiftable = [&](int k) {
    if (uses[k] != 1) return false;
    const GateKind kind = gates[gate_of_param[k]].kind;
    return kind == GateKind::RX || kind == GateKind::RY ||
           kind == GateKind::RZ;
  };

  auto f = [&](const std::vector<double>& theta) {
    return evaluate_energy(p, theta);
  };
  auto grad = [&](const std::vector<double>& theta) {
    std::vector<double> g(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
      std::vector<double> t = theta;
      if (shiftable(int(k))) {
        const double c = gates[gate_of_param[k]].coeff;
        const double shift = std::numbers::pi / (2.0 * c);
        t[k] = theta[k] + shift;
        const double ep = f(t);
        t[k] = theta[k] - shift;
        const double em = f(t);
        g[k] = (c / 2.0) * (ep - em);
      } else {
        const double h = 1e-6;
        t[k] = theta[k] + h;
        const double ep = f(t);
        t[k] = theta[k] - h;
        const double em = f(t);
        g[k] = (ep - em) / (2.0 * h);
      }
    }
    return g;
  };

  const double tol = p.backend == BackendKind::Exact ? p.tolerance
                                                     : std::max(p.tolerance, 1e-6);
  MinimizeResult m =
      lbfgsb_minimize(f, grad, p.initial, p.lower_bounds, p.upper_bounds,
                      p.max_iterations, tol);
  VqeResult res;
  res.energy = m.value;
  res.parameters = std::move(m.x);
  res.trace = std::move(m.trace);
  res.converged = m.converged;
  res.iterations = m.iterations;
  return res;
}

VqeResult vqe_multistart(const VqeProblem& p, int n_starts,
                         std::uint64_t seed) {
  if (n_starts < 1) throw Error("vqe_multistart: need at least one start");
  VqeResult best;
  bool have = false;
  for (int s = 0; s < n_starts; ++s) {
    VqeProblem q = p;
    if (s > 0) {
      std::mt19937_64 rng = make_rng(seed, std::uint64_t(s));
      std::uniform_real_distribution<double> u(-0.5, 0.5);
      for (double& v : q.initial) v += u(rng);
    }
    const VqeResult r = vqe_minimize(q);
    if (!have || r.energy < best.energy) {
      best = r;
      have = true;
    }
  }
  return best;
}

}  // namespace wavemol
