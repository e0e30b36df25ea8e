#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "hyperstab/rh.hpp"

namespace hyperstab::cli {

namespace {

std::string num(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

std::string complex_text(Complex z) {
    std::string s = num(z.real());
    s += z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+";
    s += num(std::abs(z.imag()));
    s += 'i';
    return s;
}

nlohmann::json json_number(double x) {
    if (std::isfinite(x))
        return x;
    return num(x);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
    if (!f)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

/// --out if given, otherwise the command's stdout.
void emit(const CommandOptions& options, std::ostream& out, const std::string& text) {
    if (options.out)
        write_file(*options.out, text);
    else
        out << text;
}

LaplacianSpectrum network_spectrum(const NetworkSection& n) { return spectrum(directed_laplacian(n.build())); }

bool is_lambda_plane(const ScanSection& s) {
    return s.axis1.name == "Lambda_Re" && s.axis2.name == "Lambda_Im";
}

}  // namespace

void apply_seed_override(RunConfig& config, const CommandOptions& options) {
    if (!options.seed)
        return;
    if (config.network)
        config.network->seed = *options.seed;
    if (config.sim)
        config.sim->seed = *options.seed;
}

int cmd_spectrum(const RunConfig& config, const CommandOptions& options, std::ostream& out) {
    const auto& net = config.require_network();
    const AdjacencyMatrix a = net.build();
    if (options.edge_list_out)
        write_edge_list_file(a, options.edge_list_out->string());
    const auto spec = spectrum(directed_laplacian(a));
    std::string csv = "index,re,im\n";
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k)
        csv += std::to_string(k) + ',' + num(spec.eigenvalues[k].real()) + ',' + num(spec.eigenvalues[k].imag()) + '\n';
    emit(options, out, csv);
    return kStable;
}

nlohmann::json check_report(const RunConfig& config) {
    const auto& model = config.require_model();
    const auto& t = config.require_transport();
    const auto& net = config.require_network();
    const JacobianEntries j = model.jacobian_entries();
    const auto spec = network_spectrum(net);
    const NetworkVerdict verdict = network_verdict(j, t, spec);

    nlohmann::json modes = nlohmann::json::array();
    nlohmann::json proposition = nlohmann::json::array();
    nlohmann::json coefficients = nlohmann::json::array();
    for (std::size_t k = 0; k < verdict.modes.size(); ++k) {
        const auto& m = verdict.modes[k];
        modes.push_back({{"index", k},
                         {"re", m.eigenvalue.real()},
                         {"im", m.eigenvalue.imag()},
                         {"stable", m.stable},
                         {"margin", json_number(m.rh_margin)},
                         {"growth_rate", m.growth_rate ? json_number(*m.growth_rate) : nlohmann::json(nullptr)},
                         {"failing_pivot", m.failing_pivot ? nlohmann::json(*m.failing_pivot) : nullptr}});

        const ClosedFormInputs in{t.tau_u, t.tau_v, j.f_u, j.g_v, t.D_u, t.D_v, m.eigenvalue.real(), m.eigenvalue.imag()};
        const auto cmp = compare_with_table(proposition_conditions(m.quartic, t.epsilon(), in), build_table(m.quartic));
        if (cmp.any_disagreement()) {
            nlohmann::json checks = nlohmann::json::array();
            for (const auto& c : cmp.checks)
                if (!c.sign_agrees)
                    checks.push_back({{"condition", c.name},
                                      {"pivot", c.pivot_name},
                                      {"closed_form", json_number(c.closed_form)},
                                      {"pivot_value", json_number(c.pivot)}});
            proposition.push_back({{"mode", k},
                                   {"table_stable", cmp.table_stable},
                                   {"closed_form_stable", cmp.closed_form_stable},
                                   {"sign_disagreements", checks}});
        }
        const auto diffs = closed_form_differences(j, t, m.eigenvalue);
        if (!diffs.empty()) {
            nlohmann::json d = nlohmann::json::array();
            for (const auto& c : diffs)
                d.push_back({{"coefficient", c.name},
                             {"determinant", json_number(c.determinant_value)},
                             {"alternative", json_number(c.alternative_value)}});
            coefficients.push_back({{"mode", k}, {"differences", d}});
        }
    }

    const auto& dom = verdict.modes[verdict.dominant];
    nlohmann::json report{
        {"stable", verdict.stable},
        {"mode_count", verdict.modes.size()},
        {"unstable_modes", std::count_if(verdict.modes.begin(), verdict.modes.end(),
                                         [](const ModeVerdict& m) { return !m.stable; })},
        {"dominant",
         {{"index", verdict.dominant},
          {"re", dom.eigenvalue.real()},
          {"im", dom.eigenvalue.imag()},
          {"growth_rate", dom.growth_rate ? json_number(*dom.growth_rate) : nlohmann::json(nullptr)}}},
        {"homogeneous_index", verdict.homogeneous},
        {"modes", modes},
        {"discrepancies",
         {{"closed_form_conditions_vs_table", proposition},
          {"alternative_coefficients_vs_determinant", coefficients}}},
    };
    return report;
}

int cmd_check(const RunConfig& config, const CommandOptions& options, std::ostream& out) {
    const nlohmann::json report = check_report(config);
    out << "index,re,im,stable,margin,growth_rate\n";
    for (const auto& m : report["modes"]) {
        auto field = [](const nlohmann::json& v) {
            if (v.is_null())
                return std::string("nan");
            if (v.is_string())
                return v.get<std::string>();
            return num(v.get<double>());
        };
        out << m["index"].get<std::size_t>() << ',' << num(m["re"].get<double>()) << ',' << num(m["im"].get<double>()) << ','
            << (m["stable"].get<bool>() ? "1" : "0") << ',' << field(m["margin"]) << ',' << field(m["growth_rate"])
            << '\n';
    }
    const bool stable = report["stable"].get<bool>();
    const auto& dom = report["dominant"];
    out << "verdict: " << (stable ? "stable" : "unstable") << " (" << report["unstable_modes"].get<long>() << " of "
        << report["mode_count"].get<std::size_t>() << " modes unstable; dominant mode "
        << dom["index"].get<std::size_t>() << " at Lambda = " << complex_text({dom["re"].get<double>(), dom["im"].get<double>()}) << ")\n";
    const auto& disc = report["discrepancies"];
    out << "discrepancies: " << disc["closed_form_conditions_vs_table"].size()
        << " modes where the closed-form conditions disagree with the table, "
        << disc["alternative_coefficients_vs_determinant"].size()
        << " modes where the alternative coefficients differ from the determinant\n";
    if (options.out)
        write_file(*options.out, report.dump(2) + "\n");
    return stable ? kStable : kUnstable;
}

RegionMap run_scan(const RunConfig& config, std::optional<LaplacianSpectrum>* spectrum_used) {
    const auto& scan = config.require_scan();
    const auto& model = config.require_model();
    const auto& t = config.require_transport();

    std::optional<LaplacianSpectrum> spec;
    if (config.network)
        spec = network_spectrum(*config.network);
    else if (scan.use_network && !is_lambda_plane(scan))
        throw ConfigError("[scan] lambda = network needs a [network] section");

    RegionMap map;
    if (is_lambda_plane(scan)) {
        if (scan.axis1.resolution != scan.axis2.resolution)
            throw ConfigError("[scan] the Lambda plane needs the same resolution on both axes");
        double re_min = scan.axis1.min;
        if (scan.auto_re_min && spec) {
            for (const auto& z : spec->eigenvalues)
                re_min = std::min(re_min, 1.05 * z.real());
        }
        map = scan_lambda_plane(model.jacobian_entries(), t, {re_min, scan.axis1.max},
                                {scan.axis2.min, scan.axis2.max}, scan.axis1.resolution, {scan.threads});
    } else {
        std::vector<Complex> samples = scan.samples;
        if (samples.empty()) {
            if (!spec)
                throw ConfigError("[scan] needs lambda samples: set 'lambda' or configure [network]");
            samples = spec->eigenvalues;
        }
        map = scan_parameter_plane(model.scan_model(), t, scan.axis1, scan.axis2, samples, {scan.threads});
    }
    if (spectrum_used)
        *spectrum_used = spec;
    return map;
}

int cmd_scan(const RunConfig& config, const CommandOptions& options, std::ostream& out) {
    if (options.svg && !options.out)
        throw std::invalid_argument("--svg writes next to --out; give --out as well");
    std::optional<LaplacianSpectrum> spec;
    const RegionMap map = run_scan(config, &spec);
    emit(options, out, write_region_csv(map));
    if (options.svg) {
        std::vector<SvgOverlay> overlays;
        if (spec && is_lambda_plane(config.require_scan())) {
            SvgOverlay o;
            o.label = "spectrum";
            for (const auto& z : spec->eigenvalues)
                o.points.emplace_back(z.real(), z.imag());
            overlays.push_back(std::move(o));
        }
        auto svg_path = *options.out;
        svg_path.replace_extension(".svg");
        write_file(svg_path, write_region_svg(map, overlays));
    }
    return kStable;
}

nlohmann::json simulate_record(const RunConfig& config) {
    const auto& model_cfg = config.require_model();
    const auto& t = config.require_transport();
    const auto& net = config.require_network();
    const auto& sim = config.require_sim();
    const ReactionModel model = model_cfg.reaction_model();
    const DirectedLaplacian l = directed_laplacian(net.build());

    ExperimentOptions opts;
    opts.dt = sim.dt;
    opts.horizon = sim.horizon;
    opts.skip_fraction = sim.skip_fraction;
    opts.sample_interval = sim.sample_interval;
    opts.growth_ceiling = sim.growth_ceiling;
    opts.decay_floor = sim.decay_floor;

    nlohmann::json warnings = nlohmann::json::array();
    const double heuristic = default_time_step(t, l);
    if (sim.dt > heuristic)
        warnings.push_back("dt = " + num(sim.dt) + " exceeds the step heuristic " + num(heuristic) +
                           "; the explicit scheme may be inaccurate or unstable");

    const GrowthEstimate est = perturbation_experiment(model, t, l, sim.amplitude, sim.seed, opts);
    const NetworkVerdict linear = network_verdict(model.jacobian, t, spectrum(l));
    const std::optional<double> predicted = linear.inhomogeneous_growth_rate
                                                ? linear.inhomogeneous_growth_rate
                                                : linear.modes[linear.dominant].growth_rate;

    std::string status = "ok";
    if (est.blew_up)
        status = "blow_up";
    else if (est.rate_is_bound)
        status = "short_fit";
    if (est.blew_up)
        warnings.push_back("integration blew up; the fitted rate covers the window before blow-up only");

    nlohmann::json rec{
        {"status", status},
        {"verdict", est.stable ? "stable" : "unstable"},
        {"linear_verdict", linear.stable ? "stable" : "unstable"},
        {"rate", json_number(est.rate)},
        {"seed", est.seed},
        {"dt", est.dt},
        {"horizon", sim.horizon},
        {"amplitude", sim.amplitude},
        {"fit_window", {est.fit_window.first, est.fit_window.second}},
        {"fit_points", est.fit_points},
        {"residual", json_number(est.residual)},
        {"rate_is_bound", est.rate_is_bound},
        {"blew_up", est.blew_up},
        {"reached_ceiling", est.reached_ceiling},
        {"reached_floor", est.reached_floor},
        {"initial_deviation", json_number(est.initial_deviation)},
        {"final_deviation", json_number(est.final_deviation)},
        {"warnings", warnings},
    };
    if (predicted) {
        const double tol = std::max(0.02 * std::abs(*predicted), 1e-3);
        rec["predicted_rate"] = json_number(*predicted);
        rec["difference"] = json_number(est.rate - *predicted);
        rec["tolerance"] = tol;
        rec["within_tolerance"] = std::abs(est.rate - *predicted) <= tol;
    } else {
        rec["predicted_rate"] = nullptr;
    }
    return rec;
}

int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
    const nlohmann::json rec = simulate_record(config);
    for (const auto& w : rec["warnings"])
        err << "warning: " << w.get<std::string>() << '\n';
    out << rec.dump(2) << '\n';

    if (options.out) {
        const auto& sim = config.require_sim();
        const ReactionModel model = config.require_model().reaction_model();
        const auto& t = config.require_transport();
        const DirectedLaplacian l = directed_laplacian(config.require_network().build());
        const double dt = sim.dt > 0 ? sim.dt : default_time_step(t, l);
        const int steps = static_cast<int>(std::ceil(sim.horizon / dt));
        IntegrateOptions io;
        io.sample_every = std::max(1, static_cast<int>(std::lround(sim.sample_interval / dt)));
        const auto traj =
            integrate(model, t, l, perturbed_equilibrium(model, l, sim.amplitude, sim.seed), dt, steps, io);
        write_file(*options.out, write_trajectory_csv(traj));
    }
    return rec["verdict"] == "stable" ? kStable : kUnstable;
}

int cmd_roots(const std::array<double, 8>& c, std::ostream& out) {
    ComplexQuartic q;
    for (int k = 0; k < 4; ++k) {
        q.a[k] = c[k];
        q.b[k] = c[4 + k];
    }
    const StabilityVerdict v = is_stable(q);
    out << "polynomial: z^4";
    for (int k = 1; k <= 4; ++k)
        out << " + (" << complex_text(q.coefficient(k)) << ") z^" << 4 - k;
    out << '\n';
    out << "pivots:";
    for (double p : v.pivots)
        out << ' ' << num(p);
    out << '\n';
    out << "verdict: " << (v.stable ? "stable" : "unstable");
    if (v.failing_index)
        out << " (pivot " << *v.failing_index << " is not positive)";
    out << '\n';
    const auto res = find_roots(q.to_polynomial());
    out << "roots" << (res.converged ? "" : " (not converged)") << ":\n";
    double abscissa = -std::numeric_limits<double>::infinity();
    for (const auto& z : res.roots) {
        out << "  " << complex_text(z) << '\n';
        abscissa = std::max(abscissa, z.real());
    }
    out << "spectral abscissa: " << num(abscissa) << '\n';
    return v.stable ? kStable : kUnstable;
}

}  // namespace hyperstab::cli
