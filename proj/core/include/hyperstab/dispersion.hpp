#pragma once

/**
 * Per-mode dispersion relation of the hyperbolic reaction-diffusion system
 *
 *     tau_u u'' + u' = f(u, v) + D_u L u
 *     tau_v v'' + v' = g(u, v) + D_v L v
 *
 * Linearising around the homogeneous equilibrium and projecting onto a
 * Laplacian eigenvector with eigenvalue Lambda gives
 *
 *     det [ tau_u s^2 + s - f_u - D_u Lambda        -f_v                 ]
 *         [ -g_u                      tau_v s^2 + s - g_v - D_v Lambda   ] = 0,
 *
 * a quartic in the growth rate s. Dividing by tau_u tau_v makes it monic.
 */

#include <optional>
#include <string>
#include <vector>

#include "hyperstab/models.hpp"
#include "hyperstab/network.hpp"
#include "hyperstab/polynomial.hpp"
#include "hyperstab/rh.hpp"

namespace hyperstab {

struct TransportParams {
    double D_u = 0, D_v = 0;
    double tau_u = 1, tau_v = 1;

    /// Throws std::invalid_argument unless tau_u, tau_v > 0 and D_u, D_v >= 0.
    void validate() const;
    /// 1 / (tau_u tau_v)
    [[nodiscard]] double epsilon() const { return 1.0 / (tau_u * tau_v); }
};

/// Thrown when the closed-form coefficients disagree with the determinant expansion.
class CoefficientMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Default relative tolerance of the assembly self-check.
inline constexpr double kAssemblyTolerance = 1e-12;

/**
 * Monic dispersion quartic with eps = 1 / (tau_u tau_v), Lambda = x + i y,
 * S = tau_u D_v + tau_v D_u, P = f_u D_v + g_v D_u:
 *
 *     a1 = eps (tau_u + tau_v)                       b1 = 0
 *     a2 = eps (1 - g_v tau_u - f_u tau_v - S x)     b2 = -eps S y
 *     a3 = -eps (f_u + g_v + (D_u + D_v) x)          b3 = -eps (D_u + D_v) y
 *     a4 = eps (P x + f_u g_v - f_v g_u + D_u D_v (x^2 - y^2))
 *     b4 = eps (P y + 2 D_u D_v x y)
 *
 * Every call is checked against the product of the two diagonal quadratics
 * minus f_v g_u; a relative disagreement above `tolerance` throws
 * CoefficientMismatch.
 */
[[nodiscard]] ComplexQuartic build_quartic(const JacobianEntries& j, const TransportParams& t, Complex lambda,
                                           double tolerance = kAssemblyTolerance);

/// The determinant itself, expanded by polynomial multiplication (not monic).
[[nodiscard]] ComplexPolynomial determinant_polynomial(const JacobianEntries& j, const TransportParams& t,
                                                       Complex lambda);

/// det of the 2x2 linearised operator at growth rate s.
[[nodiscard]] Complex dispersion_determinant(const JacobianEntries& j, const TransportParams& t, Complex lambda,
                                             Complex s);

/**
 * Coefficients in the alternative closed form that circulates for this
 * system: a3 = eps(-g_v + f_u + (D_u + D_v) x), a4 with D_u D_v (x^2 + y^2)
 * and b4 with D_u D_v x y. Kept only to report where it departs from the
 * determinant expansion.
 */
[[nodiscard]] ComplexQuartic alternative_closed_form_quartic(const JacobianEntries& j, const TransportParams& t,
                                                             Complex lambda);

struct CoefficientDifference {
    std::string name;  // "a3", "b4", ...
    double determinant_value;
    double alternative_value;
};

/// Coefficients where the alternative closed form differs by more than `tolerance` (relative).
[[nodiscard]] std::vector<CoefficientDifference> closed_form_differences(const JacobianEntries& j,
                                                                         const TransportParams& t, Complex lambda,
                                                                         double tolerance = 1e-12);

struct ModeVerdict {
    Complex eigenvalue;
    ComplexQuartic quartic;
    bool stable = false;
    double rh_margin = 0.0;
    std::optional<int> failing_pivot;
    /// Spectral abscissa of the quartic; empty if the root finder failed.
    std::optional<double> growth_rate;
};

[[nodiscard]] ModeVerdict mode_verdict(const JacobianEntries& j, const TransportParams& t, Complex lambda);

struct NetworkVerdict {
    bool stable = false;
    /// Same order as the spectrum.
    std::vector<ModeVerdict> modes;
    /// Index into `modes` of the largest growth rate (smallest margin if no rates).
    std::size_t dominant = 0;
    /// Index of the mode closest to Lambda = 0.
    std::size_t homogeneous = 0;
    /// Largest growth rate over modes other than the homogeneous one.
    std::optional<double> inhomogeneous_growth_rate;
};

/**
 * Every mode, including Lambda = 0 (homogeneous stability with inertia),
 * must be stable for the network to be stable.
 */
[[nodiscard]] NetworkVerdict network_verdict(const JacobianEntries& j, const TransportParams& t,
                                             const LaplacianSpectrum& spec);

}  // namespace hyperstab
