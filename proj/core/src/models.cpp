#include "hyperstab/models.hpp"

#include <cmath>
#include <sstream>

namespace hyperstab {

bool JacobianEntries::is_finite() const {
    return std::isfinite(f_u) && std::isfinite(f_v) && std::isfinite(g_u) && std::isfinite(g_v);
}

void BrusselatorParams::validate() const {
    if (!(b > 0.0) || !std::isfinite(b))
        throw std::invalid_argument("Brusselator parameter b must be positive");
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("Brusselator parameter c must be positive");
}

JacobianEntries brusselator_jacobian(const BrusselatorParams& params) {
    params.validate();
    return {params.b - 1.0, params.c, -params.b, -params.c};
}

ReactionModel brusselator(const BrusselatorParams& params) {
    params.validate();
    const double b = params.b;
    const double c = params.c;
    ReactionModel m;
    m.name = "brusselator";
    m.f = [b, c](double u, double v) { return 1.0 - (b + 1.0) * u + c * u * u * v; };
    m.g = [b, c](double u, double v) { return b * u - c * u * u * v; };
    m.equilibrium = {1.0, b / c};
    m.jacobian = brusselator_jacobian(params);
    return m;
}

bool isolated_stability(const JacobianEntries& j) {
    if (!j.is_finite())
        throw std::invalid_argument("Jacobian entries must be finite");
    return j.trace() < 0.0 && j.determinant() > 0.0;
}

JacobianEntries finite_difference_jacobian(const Kinetics& f, const Kinetics& g, Equilibrium at) {
    const double hu = 1e-6 * (1.0 + std::abs(at.u));
    const double hv = 1e-6 * (1.0 + std::abs(at.v));
    JacobianEntries j;
    j.f_u = (f(at.u + hu, at.v) - f(at.u - hu, at.v)) / (2.0 * hu);
    j.g_u = (g(at.u + hu, at.v) - g(at.u - hu, at.v)) / (2.0 * hu);
    j.f_v = (f(at.u, at.v + hv) - f(at.u, at.v - hv)) / (2.0 * hv);
    j.g_v = (g(at.u, at.v + hv) - g(at.u, at.v - hv)) / (2.0 * hv);
    return j;
}

ReactionModel generic_model(Kinetics f, Kinetics g, Equilibrium initial_guess, const NewtonOptions& options,
                            std::string name) {
    Equilibrium x = initial_guess;
    auto residual_norm = [&](Equilibrium p) { return std::hypot(f(p.u, p.v), g(p.u, p.v)); };

    double r = residual_norm(x);
    int it = 0;
    for (; it < options.max_iterations && !(r <= options.residual_tolerance); ++it) {
        if (!std::isfinite(r))
            break;
        const JacobianEntries j = finite_difference_jacobian(f, g, x);
        const double det = j.determinant();
        if (det == 0.0 || !std::isfinite(det))
            break;
        const double fu = f(x.u, x.v);
        const double gv = g(x.u, x.v);
        // Newton step solves J d = -(f, g).
        const double du = -(j.g_v * fu - j.f_v * gv) / det;
        const double dv = -(-j.g_u * fu + j.f_u * gv) / det;

        double step = 1.0;
        Equilibrium trial{x.u + du, x.v + dv};
        double rt = residual_norm(trial);
        while (!(rt < r) && step > 1e-6) {
            step *= 0.5;
            trial = {x.u + step * du, x.v + step * dv};
            rt = residual_norm(trial);
        }
        if (!(rt < r))
            break;
        x = trial;
        r = rt;
    }

    if (!(r <= options.residual_tolerance)) {
        std::ostringstream os;
        os << "Newton iteration did not reach an equilibrium after " << it << " iterations (residual " << r
           << ", last iterate (" << x.u << ", " << x.v << "))";
        throw EquilibriumNotFound(os.str(), x);
    }

    ReactionModel m;
    m.name = std::move(name);
    m.jacobian = finite_difference_jacobian(f, g, x);
    m.f = std::move(f);
    m.g = std::move(g);
    m.equilibrium = x;
    return m;
}

}  // namespace hyperstab
