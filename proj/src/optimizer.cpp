#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "holo/errors.hpp"
#include "holo/metrics.hpp"

namespace holo {

namespace {

struct Axis {
  double lo, hi, step;
  bool active;
  double fixed;
  int stride = 1;

  int count() const {
    if (!active) return 1;
    return static_cast<int>(std::floor((hi - lo) / (step * stride) + 1e-9)) + 1;
  }
  double at(int j) const { return active ? lo + j * step * stride : fixed; }
};

// Parameter vector layout: op -> (beta1, beta2, eta_g/pi); drag -> (v1..v4, eta_g/pi).
CorrectionParams to_params(CorrectionKind method, const std::vector<double>& x) {
  if (method == CorrectionKind::op) return CorrectionParams::op(x[0], x[1], x[2] * kPi);
  return CorrectionParams::drag(x[0], x[1], x[2], x[3], x[4] * kPi);
}

class Objective {
 public:
  Objective(const GateSpec& gate, const DeviceParams& device, CorrectionKind method,
            const TimeGrid& grid, int n_states)
      : gate_(gate), device_(device), method_(method), grid_(grid), n_states_(n_states),
        target_(target_unitary(gate)) {}

  double operator()(const std::vector<double>& x) const {
    try {
      DriveEnvelope env = build_drive(gate_, to_params(method_, x), device_, grid_);
      return score_channel(evolve_channel(env, device_, grid_, true), target_, n_states_).f_g;
    } catch (const std::exception&) {
      return 0.0;  // infeasible point (e.g. drive too strong for the grid)
    }
  }

  CorrectionKind method() const { return method_; }

 private:
  GateSpec gate_;
  DeviceParams device_;
  CorrectionKind method_;
  TimeGrid grid_;
  int n_states_;
  QubitOperator target_;
};

std::vector<Axis> make_axes(const GateSpec& gate, CorrectionKind method, const SearchConfig& c) {
  const bool pulse0 = std::abs(std::sin(gate.theta / 2)) > 1e-12;
  const bool pulse1 = std::abs(std::cos(gate.theta / 2)) > 1e-12;
  const double g = gate.gamma / kPi;
  Axis eta{g - c.eta_halfwidth_lo, g + c.eta_halfwidth_hi, c.eta_step, true, g};
  if (method == CorrectionKind::op) {
    return {Axis{c.beta_lo, c.beta_hi, c.beta_step, pulse0, 0.0},
            Axis{c.beta_lo, c.beta_hi, c.beta_step, pulse1, 0.0}, eta};
  }
  return {Axis{c.v_lo, c.v_hi, c.v_step, pulse1, 0.0}, Axis{c.v_lo, c.v_hi, c.v_step, pulse1, 0.0},
          Axis{c.v_lo, c.v_hi, c.v_step, pulse0, 0.0}, Axis{c.v_lo, c.v_hi, c.v_step, pulse0, 0.0},
          eta};
}

long grid_size(const std::vector<Axis>& axes) {
  long n = 1;
  for (const auto& a : axes) n *= a.count();
  return n;
}

// Widen the stride of the densest axis until the scan fits the cap.
void coarsen(std::vector<Axis>& axes, long cap) {
  while (grid_size(axes) > cap) {
    auto it = std::max_element(axes.begin(), axes.end(),
                               [](const Axis& a, const Axis& b) { return a.count() < b.count(); });
    if (it->count() <= 1) break;
    ++it->stride;
  }
}

std::vector<double> grid_point(const std::vector<Axis>& axes, long index) {
  std::vector<double> x(axes.size());
  for (size_t d = axes.size(); d-- > 0;) {
    int n = axes[d].count();
    x[d] = axes[d].at(static_cast<int>(index % n));
    index /= n;
  }
  return x;
}

std::vector<double> evaluate_parallel(const Objective& f, const std::vector<std::vector<double>>& xs,
                                      int workers) {
  std::vector<double> out(xs.size());
  std::atomic<size_t> next{0};
  auto run = [&] {
    for (size_t i; (i = next.fetch_add(1)) < xs.size();) out[i] = f(xs[i]);
  };
  int n = std::max(1, std::min<int>(workers, static_cast<int>(xs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HOLO_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

OptimizationResult optimize(const GateSpec& gate, const DeviceParams& device,
                            CorrectionKind method, const TimeGrid& grid,
                            const SearchConfig& config) {
  gate.validate();
  device.validate();
  grid.validate();
  if (method == CorrectionKind::none)
    throw ValidationError("optimize needs a correction method (drag or op)");
  if (config.budget < 2) throw ValidationError("optimizer budget must be at least 2");

  OptimizationResult res;
  const Objective f(gate, device, method, grid, config.search_states);
  const int workers = resolve_workers(config.workers);
  auto record = [&](const std::vector<double>& x, double v) {
    res.search_trace.push_back({to_params(method, x), v});
    ++res.evaluations;
  };

  std::vector<Axis> axes = make_axes(gate, method, config);
  for (const auto& a : axes)
    if (!(std::isfinite(a.lo) && std::isfinite(a.hi) && a.step > 0 && a.hi >= a.lo))
      throw ValidationError("optimizer search box must be finite with positive steps");

  // Baseline: no correction, nominal eta_g.
  std::vector<double> x0(axes.size());
  for (size_t d = 0; d < axes.size(); ++d) x0[d] = d + 1 == axes.size() ? gate.gamma / kPi : 0.0;
  const double base_search = f(x0);
  record(x0, base_search);

  // Stage 1: coarse grid over the box.
  coarsen(axes, std::max<long>(1, (config.budget - 1) / 2));
  const long n_grid = grid_size(axes);
  std::vector<std::vector<double>> pts(n_grid);
  for (long i = 0; i < n_grid; ++i) pts[i] = grid_point(axes, i);
  std::vector<double> vals = evaluate_parallel(f, pts, workers);
  std::vector<double> best_x = x0;
  double best_f = base_search;
  for (long i = 0; i < n_grid; ++i) {
    record(pts[i], vals[i]);
    if (vals[i] > best_f) {
      best_f = vals[i];
      best_x = pts[i];
    }
  }

  // Stage 2: Nelder-Mead on the active coordinates, projected onto the box.
  std::vector<int> act;
  for (size_t d = 0; d < axes.size(); ++d)
    if (axes[d].active) act.push_back(static_cast<int>(d));
  const int m = static_cast<int>(act.size());
  auto embed = [&](const std::vector<double>& y) {
    std::vector<double> x = best_x;
    for (int j = 0; j < m; ++j) {
      const Axis& a = axes[act[j]];
      x[act[j]] = std::clamp(y[j], a.lo, a.hi);
    }
    return x;
  };
  auto budget_left = [&] { return res.evaluations < config.budget; };
  auto eval = [&](const std::vector<double>& y) {
    std::vector<double> x = embed(y);
    double v = f(x);
    record(x, v);
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
    return -v;
  };

  if (m > 0 && budget_left()) {
    std::vector<std::vector<double>> simplex(m + 1, std::vector<double>(m));
    for (int j = 0; j < m; ++j) simplex[0][j] = best_x[act[j]];
    for (int i = 1; i <= m; ++i) {
      simplex[i] = simplex[0];
      const Axis& a = axes[act[i - 1]];
      double h = 0.5 * a.step * a.stride;
      simplex[i][i - 1] += simplex[0][i - 1] + h <= a.hi ? h : -h;
    }
    std::vector<double> fv(m + 1);
    fv[0] = -best_f;
    for (int i = 1; i <= m && budget_left(); ++i) fv[i] = eval(simplex[i]);

    std::vector<int> order(m + 1);
    while (budget_left()) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
      const auto& lo = simplex[order[0]];
      double spread = fv[order[m]] - fv[order[0]];
      double size = 0.0;
      for (int i = 1; i <= m; ++i)
        for (int j = 0; j < m; ++j) size = std::max(size, std::abs(simplex[order[i]][j] - lo[j]));
      if (size < config.xatol && spread < config.fatol) break;

      const int worst = order[m];
      std::vector<double> cen(m, 0.0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) cen[j] += simplex[order[i]][j] / m;
      auto along = [&](double t) {
        std::vector<double> y(m);
        for (int j = 0; j < m; ++j) y[j] = cen[j] + t * (simplex[worst][j] - cen[j]);
        return y;
      };
      auto yr = along(-1.0);
      double fr = eval(yr);
      if (fr < fv[order[0]]) {
        if (!budget_left()) break;
        auto ye = along(-2.0);
        double fe = eval(ye);
        if (fe < fr) {
          simplex[worst] = ye;
          fv[worst] = fe;
        } else {
          simplex[worst] = yr;
          fv[worst] = fr;
        }
      } else if (fr < fv[order[m - 1]]) {
        simplex[worst] = yr;
        fv[worst] = fr;
      } else {
        if (!budget_left()) break;
        bool outside = fr < fv[worst];
        auto yc = along(outside ? -0.5 : 0.5);
        double fc = eval(yc);
        if (fc < (outside ? fr : fv[worst])) {
          simplex[worst] = yc;
          fv[worst] = fc;
        } else {
          for (int i = 1; i <= m && budget_left(); ++i) {
            int k = order[i];
            for (int j = 0; j < m; ++j) simplex[k][j] = lo[j] + 0.5 * (simplex[k][j] - lo[j]);
            fv[k] = eval(simplex[k]);
          }
        }
      }
    }
  }

  // Final scoring on the full state family.
  const CorrectionParams base_params = to_params(method, x0);
  GateFidelityReport base_report =
      gate_fidelity(gate, device, base_params, grid, config.final_states);
  res.baseline_f_g = base_report.f_g;
  res.best_params = to_params(method, best_x);
  res.best_report = gate_fidelity(gate, device, res.best_params, grid, config.final_states);
  res.best_f_g = res.best_report.f_g;
  if (best_x == x0 || res.best_f_g <= res.baseline_f_g) {
    res.status = OptimizationStatus::warning;
    res.message = "no improvement over the uncorrected baseline within the evaluation budget";
    res.best_params = base_params;
    res.best_report = base_report;
    res.best_f_g = base_report.f_g;
  }
  return res;
}

std::vector<SweepRow> sweep(const GateSpec& gate, const DeviceParams& device,
                            CorrectionKind method, SweepVariable variable,
                            std::vector<double> values, const TimeGrid& grid,
                            const SearchConfig& config) {
  grid.validate();
  const double dt = grid.dt();
  std::sort(values.begin(), values.end());
  std::vector<SweepRow> rows;
  for (double v : values) {
    SweepRow row;
    row.value = v;
    try {
      if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("sweep values must be positive");
      TimeGrid g = grid;
      DeviceParams d = device;
      if (variable == SweepVariable::tau) {
        g.tau = v;
        g.n_steps = std::max(100, 2 * static_cast<int>(std::lround(v / dt / 2)));
      } else {
        d.alpha = v;
        d.omega_levels.reset();
      }
      OptimizationResult r = optimize(gate, d, method, g, config);
      row.ok = true;
      row.baseline_f_g = r.baseline_f_g;
      row.opt_f_g = r.best_f_g;
      row.best_params = r.best_params;
      row.status = r.status;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace holo
