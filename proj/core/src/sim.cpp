#include "hyperstab/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "hyperstab/random.hpp"

namespace hyperstab {

SimState SimState::homogeneous(const ReactionModel& model, int n) {
    SimState s;
    s.u = Eigen::VectorXd::Constant(n, model.equilibrium.u);
    s.v = Eigen::VectorXd::Constant(n, model.equilibrium.v);
    s.du = Eigen::VectorXd::Zero(n);
    s.dv = Eigen::VectorXd::Zero(n);
    return s;
}

bool SimState::is_finite() const {
    return u.allFinite() && v.allFinite() && du.allFinite() && dv.allFinite() && std::isfinite(time);
}

namespace {

class Rhs {
public:
    Rhs(const ReactionModel& model, const TransportParams& t, const Eigen::MatrixXd& l)
        : model_(model), t_(t), l_(l), n_(l.rows()), lu_(n_), lv_(n_) {}

    // y = [u, v, du, dv]
    void operator()(const Eigen::VectorXd& y, Eigen::VectorXd& out) {
        const auto u = y.segment(0, n_);
        const auto v = y.segment(n_, n_);
        const auto w = y.segment(2 * n_, n_);
        const auto z = y.segment(3 * n_, n_);
        lu_.noalias() = l_ * u;
        lv_.noalias() = l_ * v;
        out.segment(0, n_) = w;
        out.segment(n_, n_) = z;
        for (Eigen::Index i = 0; i < n_; ++i) {
            out[2 * n_ + i] = (model_.f(u[i], v[i]) + t_.D_u * lu_[i] - w[i]) / t_.tau_u;
            out[3 * n_ + i] = (model_.g(u[i], v[i]) + t_.D_v * lv_[i] - z[i]) / t_.tau_v;
        }
    }

private:
    const ReactionModel& model_;
    const TransportParams& t_;
    const Eigen::MatrixXd& l_;
    Eigen::Index n_;
    Eigen::VectorXd lu_, lv_;
};

Eigen::VectorXd pack(const SimState& s) {
    const Eigen::Index n = s.u.size();
    Eigen::VectorXd y(4 * n);
    y << s.u, s.v, s.du, s.dv;
    return y;
}

void unpack(const Eigen::VectorXd& y, double time, SimState& s) {
    const Eigen::Index n = y.size() / 4;
    s.u = y.segment(0, n);
    s.v = y.segment(n, n);
    s.du = y.segment(2 * n, n);
    s.dv = y.segment(3 * n, n);
    s.time = time;
}

}  // namespace

std::pair<int, bool> integrate_observed(const ReactionModel& model, const TransportParams& t,
                                        const DirectedLaplacian& l, const SimState& init, double dt, int steps,
                                        const StateObserver& observer, const IntegrateOptions& options) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("time step must be positive");
    if (steps < 0)
        throw std::invalid_argument("step count must be nonnegative");
    if (options.sample_every < 1)
        throw std::invalid_argument("sample_every must be at least 1");
    t.validate();
    const int n = l.size();
    if (init.u.size() != n || init.v.size() != n || init.du.size() != n || init.dv.size() != n)
        throw std::invalid_argument("initial state dimension does not match the network");
    if (!init.is_finite())
        throw std::invalid_argument("initial state must be finite");

    Rhs rhs(model, t, l.entries());
    Eigen::VectorXd y = pack(init);
    Eigen::VectorXd k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
    SimState current = init;
    if (!observer(current))
        return {0, false};

    for (int step = 1; step <= steps; ++step) {
        rhs(y, k1);
        tmp = y + 0.5 * dt * k1;
        rhs(tmp, k2);
        tmp = y + 0.5 * dt * k2;
        rhs(tmp, k3);
        tmp = y + dt * k3;
        rhs(tmp, k4);
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double time = init.time + step * dt;
        if (!y.allFinite() || y.norm() > options.blowup_norm) {
            unpack(y, time, current);
            observer(current);
            return {step, true};
        }
        if (step % options.sample_every == 0 || step == steps) {
            unpack(y, time, current);
            if (!observer(current))
                return {step, false};
        }
    }
    return {steps, false};
}

Trajectory integrate(const ReactionModel& model, const TransportParams& t, const DirectedLaplacian& l,
                     const SimState& init, double dt, int steps, const IntegrateOptions& options) {
    Trajectory traj;
    const auto [taken, blew_up] = integrate_observed(
        model, t, l, init, dt, steps,
        [&](const SimState& s) {
            traj.samples.push_back(s);
            return true;
        },
        options);
    traj.steps_taken = taken;
    traj.blew_up = blew_up;
    return traj;
}

double default_time_step(const TransportParams& t, const DirectedLaplacian& l) {
    t.validate();
    const double tau_min = std::min(t.tau_u, t.tau_v);
    double dt = std::min(1e-2, 0.1 * tau_min);
    const double max_diag = l.entries().diagonal().cwiseAbs().maxCoeff();
    const double max_d = std::max(t.D_u, t.D_v);
    if (max_diag > 0.0 && max_d > 0.0)
        dt = std::min(dt, 0.5 / max_diag * tau_min / max_d);
    return dt;
}

double deviation_norm(const SimState& s, const Equilibrium& eq) {
    return std::sqrt((s.u.array() - eq.u).square().sum() + (s.v.array() - eq.v).square().sum());
}

SimState perturbed_equilibrium(const ReactionModel& model, const DirectedLaplacian& l, double amplitude,
                               std::uint64_t seed) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude))
        throw std::invalid_argument("perturbation amplitude must be positive");
    const int n = l.size();
    if (n < 2)
        throw std::invalid_argument("an inhomogeneous perturbation needs at least two nodes");

    Rng rng(seed);
    Eigen::VectorXd pu(n), pv(n);
    for (int i = 0; i < n; ++i)
        pu[i] = uniform(rng, -1.0, 1.0);
    for (int i = 0; i < n; ++i)
        pv[i] = uniform(rng, -1.0, 1.0);

    // Remove the component along the homogeneous mode: x - (w . x) 1 with
    // w^T L = 0 and sum(w) = 1. What remains lies in the range of L, the
    // invariant subspace of the modes Lambda != 0.
    const Eigen::VectorXd w = homogeneous_left_vector(l);
    pu.array() -= w.dot(pu);
    pv.array() -= w.dot(pv);

    const double norm = std::sqrt(pu.squaredNorm() + pv.squaredNorm());
    if (!(norm > 0.0))
        throw std::runtime_error("degenerate perturbation after projection");
    const double scale = amplitude / norm;

    SimState s = SimState::homogeneous(model, n);
    s.u += scale * pu;
    s.v += scale * pv;
    return s;
}

GrowthEstimate perturbation_experiment(const ReactionModel& model, const TransportParams& t,
                                       const DirectedLaplacian& l, double amplitude, std::uint64_t seed,
                                       const ExperimentOptions& options) {
    if (!(options.horizon > 0.0))
        throw std::invalid_argument("horizon must be positive");
    if (!(options.skip_fraction >= 0.0 && options.skip_fraction < 1.0))
        throw std::invalid_argument("skip_fraction must lie in [0, 1)");
    if (!(options.decay_floor > 0.0 && options.growth_ceiling > options.decay_floor))
        throw std::invalid_argument("need 0 < decay_floor < growth_ceiling");

    GrowthEstimate est;
    est.seed = seed;
    est.dt = options.dt > 0.0 ? options.dt : default_time_step(t, l);
    const int steps = static_cast<int>(std::ceil(options.horizon / est.dt));
    IntegrateOptions io = options.integrate;
    io.sample_every = std::max(1, static_cast<int>(std::lround(options.sample_interval / est.dt)));

    const SimState init = perturbed_equilibrium(model, l, amplitude, seed);
    std::vector<double> times, logs;
    est.initial_deviation = deviation_norm(init, model.equilibrium);

    const auto [taken, blew_up] = integrate_observed(
        model, t, l, init, est.dt, steps,
        [&](const SimState& s) {
            const double d = deviation_norm(s, model.equilibrium);
            est.final_deviation = d;
            if (!std::isfinite(d))
                return false;
            if (d > options.growth_ceiling) {
                est.reached_ceiling = true;
                return false;
            }
            if (d < options.decay_floor) {
                est.reached_floor = true;
                return false;
            }
            times.push_back(s.time);
            logs.push_back(std::log(d));
            return true;
        },
        io);
    (void)taken;
    est.blew_up = blew_up;

    const double span = times.empty() ? 0.0 : times.back();
    const double start = options.skip_fraction * span;
    double st = 0, sl = 0, stt = 0, stl = 0;
    int m = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < start)
            continue;
        st += times[k];
        sl += logs[k];
        stt += times[k] * times[k];
        stl += times[k] * logs[k];
        ++m;
    }
    est.fit_points = m;
    est.fit_window = {start, span};

    constexpr int min_points = 8;
    if (m >= min_points && span > start) {
        const double denom = m * stt - st * st;
        est.rate = (m * stl - st * sl) / denom;
        const double intercept = (sl - est.rate * st) / m;
        double ss = 0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (times[k] < start)
                continue;
            const double r = logs[k] - (intercept + est.rate * times[k]);
            ss += r * r;
        }
        est.residual = std::sqrt(ss / m);
    } else {
        // Too short a window: report the average rate from the start, which
        // bounds the decay rate from above when the run hit the floor early.
        est.rate_is_bound = true;
        const double end_time = std::max(span, est.dt);
        est.rate = std::log(std::max(est.final_deviation, 1e-300) / est.initial_deviation) / end_time;
    }

    if (est.blew_up || est.reached_ceiling)
        est.stable = false;
    else if (est.reached_floor)
        est.stable = true;
    else
        est.stable = est.rate < 0.0;
    return est;
}

std::string write_trajectory_csv(const Trajectory& trajectory) {
    std::string out = "t,node,u,v,du,dv\n";
    char buf[64];
    auto num = [&](double x) {
        const auto res = std::to_chars(buf, buf + sizeof buf, x);
        out.append(buf, res.ptr);
    };
    for (const auto& s : trajectory.samples) {
        for (int i = 0; i < s.size(); ++i) {
            num(s.time);
            out += ',';
            out += std::to_string(i);
            out += ',';
            num(s.u[i]);
            out += ',';
            num(s.v[i]);
            out += ',';
            num(s.du[i]);
            out += ',';
            num(s.dv[i]);
            out += '\n';
        }
    }
    return out;
}

}  // namespace hyperstab
