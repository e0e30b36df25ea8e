#include "hyperstab/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hyperstab {

void TransportParams::validate() const {
    if (!(tau_u > 0.0) || !std::isfinite(tau_u))
        throw std::invalid_argument("tau_u must be positive");
    if (!(tau_v > 0.0) || !std::isfinite(tau_v))
        throw std::invalid_argument("tau_v must be positive");
    if (!(D_u >= 0.0) || !std::isfinite(D_u))
        throw std::invalid_argument("D_u must be nonnegative");
    if (!(D_v >= 0.0) || !std::isfinite(D_v))
        throw std::invalid_argument("D_v must be nonnegative");
}

namespace {

void check_inputs(const JacobianEntries& j, const TransportParams& t, Complex lambda) {
    if (!j.is_finite())
        throw std::invalid_argument("Jacobian entries must be finite");
    t.validate();
    if (!is_finite(lambda))
        throw std::invalid_argument("Laplacian eigenvalue must be finite");
}

ComplexQuartic closed_form(const JacobianEntries& j, const TransportParams& t, Complex lambda) {
    const double eps = t.epsilon();
    const double x = lambda.real();
    const double y = lambda.imag();
    const double s = t.tau_u * t.D_v + t.tau_v * t.D_u;
    const double p = j.f_u * t.D_v + j.g_v * t.D_u;
    const double dsum = t.D_u + t.D_v;
    const double dprod = t.D_u * t.D_v;

    ComplexQuartic q;
    q.a[0] = eps * (t.tau_u + t.tau_v);
    q.b[0] = 0.0;
    q.a[1] = eps * (1.0 - j.g_v * t.tau_u - j.f_u * t.tau_v - s * x);
    q.b[1] = -eps * s * y;
    q.a[2] = -eps * (j.f_u + j.g_v + dsum * x);
    q.b[2] = -eps * dsum * y;
    q.a[3] = eps * (p * x + j.determinant() + dprod * (x * x - y * y));
    q.b[3] = eps * (p * y + 2.0 * dprod * x * y);
    return q;
}

}  // namespace

ComplexPolynomial determinant_polynomial(const JacobianEntries& j, const TransportParams& t, Complex lambda) {
    check_inputs(j, t, lambda);
    const ComplexPolynomial upper({t.tau_u, 1.0, -j.f_u - t.D_u * lambda});
    const ComplexPolynomial lower({t.tau_v, 1.0, -j.g_v - t.D_v * lambda});
    auto product = upper * lower;
    auto c = product.coefficients();
    c.back() -= j.f_v * j.g_u;
    return ComplexPolynomial(std::move(c));
}

Complex dispersion_determinant(const JacobianEntries& j, const TransportParams& t, Complex lambda, Complex s) {
    const Complex j11 = t.tau_u * s * s + s - j.f_u - t.D_u * lambda;
    const Complex j22 = t.tau_v * s * s + s - j.g_v - t.D_v * lambda;
    return j11 * j22 - j.f_v * j.g_u;
}

ComplexQuartic build_quartic(const JacobianEntries& j, const TransportParams& t, Complex lambda, double tolerance) {
    check_inputs(j, t, lambda);
    const ComplexQuartic q = closed_form(j, t, lambda);
    if (!q.is_finite())
        throw std::overflow_error("dispersion coefficients overflowed");

    const ComplexQuartic expanded = ComplexQuartic::from_polynomial(determinant_polynomial(j, t, lambda));
    double scale = 1.0;
    for (int k = 0; k < 4; ++k)
        scale = std::max({scale, std::abs(expanded.a[k]), std::abs(expanded.b[k])});
    for (int k = 0; k < 4; ++k) {
        const double da = std::abs(q.a[k] - expanded.a[k]);
        const double db = std::abs(q.b[k] - expanded.b[k]);
        if (da > tolerance * scale || db > tolerance * scale) {
            std::ostringstream os;
            os << "dispersion coefficient " << (k + 1) << " disagrees with the determinant expansion: closed form ("
               << q.a[k] << ", " << q.b[k] << "), expansion (" << expanded.a[k] << ", " << expanded.b[k] << ")";
            throw CoefficientMismatch(os.str());
        }
    }
    return q;
}

ComplexQuartic alternative_closed_form_quartic(const JacobianEntries& j, const TransportParams& t, Complex lambda) {
    check_inputs(j, t, lambda);
    const double eps = t.epsilon();
    const double x = lambda.real();
    const double y = lambda.imag();
    const double s = t.tau_u * t.D_v + t.tau_v * t.D_u;
    const double dsum = t.D_u + t.D_v;
    const double dprod = t.D_u * t.D_v;

    ComplexQuartic q;
    q.a[0] = eps * (t.tau_u + t.tau_v);
    q.b[0] = 0.0;
    q.a[1] = eps * (1.0 - j.g_v * t.tau_u - j.f_u * t.tau_v - s * x);
    q.b[1] = eps * (-y * s);
    q.a[2] = eps * (-j.g_v + j.f_u + dsum * x);
    q.b[2] = eps * (-y * dsum);
    q.a[3] = eps * ((j.f_u * t.D_v + j.g_v * t.D_u) * x + j.f_u * j.g_v - j.f_v * j.g_u + dprod * (x * x + y * y));
    q.b[3] = eps * ((j.g_v * t.D_u + j.f_u * t.D_v) * y + dprod * x * y);
    return q;
}

std::vector<CoefficientDifference> closed_form_differences(const JacobianEntries& j, const TransportParams& t,
                                                           Complex lambda, double tolerance) {
    const ComplexQuartic det = build_quartic(j, t, lambda);
    const ComplexQuartic alt = alternative_closed_form_quartic(j, t, lambda);
    std::vector<CoefficientDifference> out;
    for (int k = 0; k < 4; ++k) {
        const auto check = [&](char part, double d, double a) {
            if (std::abs(d - a) > tolerance * std::max(1.0, std::abs(d)))
                out.push_back({std::string(1, part) + std::to_string(k + 1), d, a});
        };
        check('a', det.a[k], alt.a[k]);
        check('b', det.b[k], alt.b[k]);
    }
    return out;
}

ModeVerdict mode_verdict(const JacobianEntries& j, const TransportParams& t, Complex lambda) {
    ModeVerdict m;
    m.eigenvalue = lambda;
    m.quartic = build_quartic(j, t, lambda);
    const StabilityVerdict v = is_stable(m.quartic);
    m.stable = v.stable;
    m.rh_margin = v.margin;
    m.failing_pivot = v.failing_index;
    const RootsResult r = find_roots(m.quartic.to_polynomial());
    if (r.converged) {
        double best = r.roots.front().real();
        for (const auto& z : r.roots)
            best = std::max(best, z.real());
        m.growth_rate = best;
    }
    return m;
}

NetworkVerdict network_verdict(const JacobianEntries& j, const TransportParams& t, const LaplacianSpectrum& spec) {
    if (spec.eigenvalues.empty())
        throw std::invalid_argument("spectrum is empty");
    NetworkVerdict out;
    out.modes.reserve(spec.eigenvalues.size());
    for (const auto& lambda : spec.eigenvalues)
        out.modes.push_back(mode_verdict(j, t, lambda));

    out.stable = std::all_of(out.modes.begin(), out.modes.end(), [](const ModeVerdict& m) { return m.stable; });

    for (std::size_t k = 1; k < out.modes.size(); ++k)
        if (std::abs(out.modes[k].eigenvalue) < std::abs(out.modes[out.homogeneous].eigenvalue))
            out.homogeneous = k;

    const bool have_rates = std::all_of(out.modes.begin(), out.modes.end(),
                                        [](const ModeVerdict& m) { return m.growth_rate.has_value(); });
    for (std::size_t k = 1; k < out.modes.size(); ++k) {
        const auto& cand = out.modes[k];
        const auto& best = out.modes[out.dominant];
        const bool better = have_rates ? *cand.growth_rate > *best.growth_rate : cand.rh_margin < best.rh_margin;
        if (better)
            out.dominant = k;
    }
    if (have_rates) {
        for (std::size_t k = 0; k < out.modes.size(); ++k) {
            if (k == out.homogeneous)
                continue;
            const double r = *out.modes[k].growth_rate;
            if (!out.inhomogeneous_growth_rate || r > *out.inhomogeneous_growth_rate)
                out.inhomogeneous_growth_rate = r;
        }
    }
    return out;
}

}  // namespace hyperstab
