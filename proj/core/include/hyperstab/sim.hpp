#pragma once

/**
 * Time-domain integration of the networked hyperbolic system, written as
 * the first-order system
 *
 *     u' = w,  v' = z,
 *     w' = (f(u, v) + D_u L u - w) / tau_u,
 *     z' = (g(u, v) + D_v L v - z) / tau_v,
 *
 * with classical fixed-step RK4.
 */

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hyperstab/dispersion.hpp"
#include "hyperstab/models.hpp"
#include "hyperstab/network.hpp"

namespace hyperstab {

struct SimState {
    Eigen::VectorXd u, v, du, dv;
    double time = 0;

    /// Every node at the model equilibrium with zero velocity.
    static SimState homogeneous(const ReactionModel& model, int n);
    [[nodiscard]] int size() const { return static_cast<int>(u.size()); }
    [[nodiscard]] bool is_finite() const;
};

struct Trajectory {
    std::vector<SimState> samples;
    /// Norm of the state exceeded the blow-up threshold; integration stopped there.
    bool blew_up = false;
    int steps_taken = 0;
};

struct IntegrateOptions {
    int sample_every = 1;
    double blowup_norm = 1e12;
};

/// Return false to stop the integration early.
using StateObserver = std::function<bool(const SimState&)>;

/**
 * Advances `steps` RK4 steps of size dt. The observer sees the initial state
 * and then every `sample_every`-th step. Returns {steps taken, blew up}.
 */
std::pair<int, bool> integrate_observed(const ReactionModel& model, const TransportParams& t,
                                        const DirectedLaplacian& l, const SimState& init, double dt, int steps,
                                        const StateObserver& observer, const IntegrateOptions& options = {});

[[nodiscard]] Trajectory integrate(const ReactionModel& model, const TransportParams& t, const DirectedLaplacian& l,
                                   const SimState& init, double dt, int steps, const IntegrateOptions& options = {});

/// min(1e-2, 0.1 min(tau), 0.5 min(tau) / (max|L_ii| max(D))); the last term is skipped without coupling.
[[nodiscard]] double default_time_step(const TransportParams& t, const DirectedLaplacian& l);

/// Euclidean norm of (u - u*, v - v*) over all nodes.
[[nodiscard]] double deviation_norm(const SimState& s, const Equilibrium& eq);

struct ExperimentOptions {
    /// 0 selects default_time_step.
    double dt = 0;
    double horizon = 200;
    /// Fraction of the effective span discarded as transient before fitting.
    double skip_fraction = 0.2;
    /// Deviation recorded every `sample_interval` time units (rounded to whole steps).
    double sample_interval = 0.1;
    /// Leaving the linear regime: deviation above this ends the fit window and means growth.
    double growth_ceiling = 1e-2;
    /// Rounding floor: deviation below this ends the fit window and means decay.
    double decay_floor = 1e-12;
    IntegrateOptions integrate;
};

struct GrowthEstimate {
    std::uint64_t seed = 0;
    /// Least-squares slope of log(deviation) over the fit window.
    double rate = 0;
    std::pair<double, double> fit_window{0, 0};
    /// RMS residual of the log-linear fit.
    double residual = 0;
    int fit_points = 0;
    /// True when the deviation shrank (or never grew, with negative rate).
    bool stable = false;
    bool blew_up = false;
    /// Fewer than 8 samples landed in the window: `rate` is only an upper bound on the decay rate.
    bool rate_is_bound = false;
    bool reached_ceiling = false;
    bool reached_floor = false;
    double initial_deviation = 0;
    double final_deviation = 0;
    double dt = 0;
};

/**
 * Perturbs the homogeneous equilibrium by a seeded random vector with zero
 * component along the homogeneous mode (zero left-null-vector average),
 * scaled to Euclidean norm `amplitude`, and fits the exponential rate of the
 * deviation.
 *
 * The effective span ends at the horizon or when the deviation first leaves
 * [decay_floor, growth_ceiling]; the fit uses the last (1 - skip_fraction) of it.
 */
[[nodiscard]] GrowthEstimate perturbation_experiment(const ReactionModel& model, const TransportParams& t,
                                                     const DirectedLaplacian& l, double amplitude, std::uint64_t seed,
                                                     const ExperimentOptions& options = {});

/// Seeded perturbation used by perturbation_experiment, exposed for reuse.
[[nodiscard]] SimState perturbed_equilibrium(const ReactionModel& model, const DirectedLaplacian& l,
                                             double amplitude, std::uint64_t seed);

/// `t,node,u,v,du,dv` rows for every sample and node.
[[nodiscard]] std::string write_trajectory_csv(const Trajectory& trajectory);

}  // namespace hyperstab
