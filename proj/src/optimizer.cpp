#include "quadcover/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace quadcover::optimizer {

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(n));
  const double ratio = hi / lo;
  for (int i = 0; i < n; ++i)
    g[static_cast<size_t>(i)] = lo * std::pow(ratio, static_cast<double>(i) / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

double central_difference(const Objective& f, double x, double step, double lo, double hi) {
  double xl = x - step, xr = x + step;
  if (xl < lo) xl = lo;
  if (xr > hi) xr = hi;
  if (!(xr > xl)) return 0.0;
  return (f(xr) - f(xl)) / (xr - xl);
}

}  // namespace

Bracket bracket_minimum(const Objective& f, double lo, double hi, int grid_points) {
  if (!(lo > 0.0) || !(hi > lo))
    throw OutOfRangeError("bracket_minimum: requires 0 < lo < hi");
  if (grid_points < 16)
    throw OutOfRangeError("bracket_minimum: grid_points must be >= 16");

  const auto grid = log_grid(lo, hi, grid_points);
  std::vector<double> vals(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    vals[i] = f(grid[i]);
    if (!std::isfinite(vals[i]))
      throw NonFiniteError("bracket_minimum: objective is non-finite inside the range");
  }

  size_t best = 0;
  int local_minima = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (vals[i] < vals[best]) best = i;
    if (i > 0 && i + 1 < grid.size() && vals[i] < vals[i - 1] && vals[i] < vals[i + 1])
      ++local_minima;
  }

  Bracket b;
  b.candidate_minima = local_minima;
  if (best == 0) {
    b.lo = b.mid = grid.front();
    b.hi = grid[1];
    b.at_endpoint = true;
    b.at_lower = true;
  } else if (best + 1 == grid.size()) {
    b.lo = grid[grid.size() - 2];
    b.mid = b.hi = grid.back();
    b.at_endpoint = true;
    b.at_lower = false;
  } else {
    b.lo = grid[best - 1];
    b.mid = grid[best];
    b.hi = grid[best + 1];
  }
  return b;
}

OptimizationResult minimize_scalar(const Objective& f, const Bracket& bracket, double tol_m) {
  if (!(tol_m > 0.0)) throw OutOfRangeError("minimize_scalar: tol_m must be > 0");

  OptimizationResult r;
  r.domain_lo = bracket.lo;
  r.domain_hi = bracket.hi;

  if (bracket.at_endpoint) {
    r.h_opt = bracket.at_lower ? bracket.lo : bracket.hi;
    r.objective_value = f(r.h_opt);
    r.bracket_lo = bracket.lo;
    r.bracket_hi = bracket.hi;
    r.boundary = true;
    const double step = std::max(tol_m, 1e-3 * r.h_opt);
    r.stationarity_residual =
        std::abs(central_difference(f, r.h_opt, step, bracket.lo, bracket.hi));
    return r;
  }

  constexpr double kInvPhi = 0.6180339887498949;
  double a = bracket.lo, b = bracket.hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int iters = 0;
  while (b - a > tol_m && iters < 400) {
    if (f1 > f2) {
      a = x1;
      x1 = x2; f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1; f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
    ++iters;
  }
  r.h_opt = 0.5 * (a + b);
  r.objective_value = f(r.h_opt);
  if (!std::isfinite(r.objective_value))
    throw NonFiniteError("minimize_scalar: objective non-finite at the optimum");
  r.bracket_lo = a;
  r.bracket_hi = b;
  r.iterations = iters;
  const double step = std::max(tol_m, 1e-3 * r.h_opt);
  r.stationarity_residual = std::abs((f(r.h_opt + step) - f(r.h_opt - step)) / (2.0 * step));
  return r;
}

OptimizationResult optimal_altitude_pathloss(double a, double b,
                                             const channel::LinkBudget& link,
                                             const channel::Environment& env,
                                             const SearchSettings& settings) {
  const Objective f = [&, a, b](double h) { return channel::max_path_loss_db(a, b, h, link, env); };
  const Bracket br = bracket_minimum(f, settings.h_min, settings.h_max, settings.grid_points);
  OptimizationResult r = minimize_scalar(f, br, settings.tol_m);
  r.domain_lo = settings.h_min;
  r.domain_hi = settings.h_max;
  return r;
}

OptimizationResult optimal_altitude_snr(double a, double b,
                                        const channel::LinkBudget& link,
                                        const channel::Environment& env,
                                        const SearchSettings& settings) {
  const Objective f = [&, a, b](double h) { return -channel::min_snr_db(a, b, h, link, env); };
  const Bracket br = bracket_minimum(f, settings.h_min, settings.h_max, settings.grid_points);
  OptimizationResult r = minimize_scalar(f, br, settings.tol_m);
  r.objective_value = -r.objective_value;
  r.domain_lo = settings.h_min;
  r.domain_hi = settings.h_max;
  return r;
}

OptimizationResult optimal_altitude_energy(double a, double b,
                                           const channel::LinkBudget& link,
                                           const channel::Environment& env,
                                           const energy::PropulsionParams& p,
                                           const energy::MissionSpec& mission,
                                           energy::TransitModel model,
                                           const SearchSettings& settings) {
  const auto energy_or_inf = [&, a, b](double h) -> double {
    try {
      return energy::total_energy_j(a, b, h, link, env, p, mission, model);
    } catch (const NonPositiveRateError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  // Restrict to the altitudes with a positive rate before bracketing.
  const auto grid = log_grid(settings.h_min, settings.h_max, settings.grid_points);
  std::vector<double> vals(grid.size());
  size_t best = grid.size();
  for (size_t i = 0; i < grid.size(); ++i) {
    vals[i] = energy_or_inf(grid[i]);
    if (std::isfinite(vals[i]) && (best == grid.size() || vals[i] < vals[best])) best = i;
  }
  if (best == grid.size())
    throw EmptyFeasibleSetError("optimal_altitude_energy: no altitude yields a positive rate");

  size_t feas_lo = best, feas_hi = best;
  while (feas_lo > 0 && std::isfinite(vals[feas_lo - 1])) --feas_lo;
  while (feas_hi + 1 < grid.size() && std::isfinite(vals[feas_hi + 1])) ++feas_hi;

  Bracket br;
  if (best == feas_lo) {
    br.lo = br.mid = grid[feas_lo];
    br.hi = grid[feas_lo + (feas_hi > feas_lo ? 1 : 0)];
    br.at_endpoint = true;
    br.at_lower = true;
  } else if (best == feas_hi) {
    br.lo = grid[feas_hi - 1];
    br.mid = br.hi = grid[feas_hi];
    br.at_endpoint = true;
    br.at_lower = false;
  } else {
    br.lo = grid[best - 1];
    br.mid = grid[best];
    br.hi = grid[best + 1];
  }
  for (size_t i = feas_lo + 1; i + 1 <= feas_hi; ++i)
    if (vals[i] < vals[i - 1] && vals[i] < vals[i + 1]) ++br.candidate_minima;

  OptimizationResult r = minimize_scalar(energy_or_inf, br, settings.tol_m);
  r.domain_lo = grid[feas_lo];
  r.domain_hi = grid[feas_hi];
  return r;
}

}  // namespace quadcover::optimizer
