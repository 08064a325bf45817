#pragma once

#include <functional>

#include "quadcover/channel.hpp"
#include "quadcover/energy.hpp"
#include "quadcover/errors.hpp"

namespace quadcover::optimizer {

using Objective = std::function<double(double)>;

struct SearchSettings {
  double h_min = 1.0;      ///< search domain lower bound (m)
  double h_max = 10000.0;  ///< search domain upper bound (m)
  double tol_m = 0.01;     ///< golden-section bracket width target (m)
  int grid_points = 64;    ///< coarse log-spaced scan size
};

struct Bracket {
  double lo = 0.0;
  double mid = 0.0;
  double hi = 0.0;
  bool at_endpoint = false;      ///< scan minimum sits on a domain endpoint
  bool at_lower = false;         ///< which endpoint, when at_endpoint is set
  int candidate_minima = 0;      ///< strict local minima seen in the scan
};

struct OptimizationResult {
  double h_opt = 0.0;
  double objective_value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  double stationarity_residual = 0.0;  ///< |central-difference derivative| at h_opt
  bool boundary = false;               ///< optimum reported at a domain endpoint
  double domain_lo = 0.0;              ///< search domain actually used
  double domain_hi = 0.0;
};

/// Coarse log-spaced scan of [lo, hi] locating a descent-ascent triple.
/// Throws NonFiniteError if the objective is non-finite anywhere on the grid,
/// OutOfRangeError for a bad domain or grid_points < 16.
Bracket bracket_minimum(const Objective& f, double lo, double hi, int grid_points);

/// Golden-section contraction of the bracket to width <= tol_m. Deterministic
/// for identical inputs. Endpoint brackets are passed through with the
/// boundary flag set.
OptimizationResult minimize_scalar(const Objective& f, const Bracket& bracket, double tol_m);

/// Altitude minimizing the boundary path loss.
OptimizationResult optimal_altitude_pathloss(double a, double b,
                                             const channel::LinkBudget& link,
                                             const channel::Environment& env,
                                             const SearchSettings& settings);

/// Altitude maximizing the boundary SNR. objective_value is the SNR in dB.
OptimizationResult optimal_altitude_snr(double a, double b,
                                        const channel::LinkBudget& link,
                                        const channel::Environment& env,
                                        const SearchSettings& settings);

/// Altitude minimizing total mission energy, restricted to altitudes with a
/// positive achievable rate. domain_lo/hi report the feasible sub-bracket.
/// Throws EmptyFeasibleSetError when no altitude yields a positive rate.
OptimizationResult optimal_altitude_energy(double a, double b,
                                           const channel::LinkBudget& link,
                                           const channel::Environment& env,
                                           const energy::PropulsionParams& p,
                                           const energy::MissionSpec& mission,
                                           energy::TransitModel model,
                                           const SearchSettings& settings);

}  // namespace quadcover::optimizer
