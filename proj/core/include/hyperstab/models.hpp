#pragma once

/**
 * Two-species reaction kinetics u' = f(u, v), v' = g(u, v), their
 * equilibrium and the Jacobian there.
 */

#include <functional>
#include <stdexcept>
#include <string>

namespace hyperstab {

/// Partial derivatives of (f, g) at the equilibrium.
struct JacobianEntries {
    double f_u = 0, f_v = 0, g_u = 0, g_v = 0;

    [[nodiscard]] double trace() const { return f_u + g_v; }
    [[nodiscard]] double determinant() const { return f_u * g_v - f_v * g_u; }
    [[nodiscard]] bool is_finite() const;
};

struct Equilibrium {
    double u = 0, v = 0;
};

using Kinetics = std::function<double(double, double)>;

struct ReactionModel {
    std::string name;
    Kinetics f;
    Kinetics g;
    Equilibrium equilibrium;
    JacobianEntries jacobian;
};

struct BrusselatorParams {
    double b = 0, c = 0;

    /// Throws std::invalid_argument unless b > 0 and c > 0.
    void validate() const;
};

/**
 * Brusselator with kinetics
 *
 *     f(u, v) = 1 - (b + 1) u + c u^2 v
 *     g(u, v) = b u - c u^2 v
 *
 * equilibrium (1, b/c) and Jacobian [[b - 1, c], [-b, -c]].
 *
 * A frequently quoted variant writes f with -(b - 1) u; that form has no
 * equilibrium at (1, b/c) and does not produce this Jacobian. The kinetics
 * here are the ones consistent with the Jacobian, which is what the linear
 * analysis and the simulator both use.
 */
[[nodiscard]] ReactionModel brusselator(const BrusselatorParams& params);

/// Closed-form Brusselator Jacobian at (1, b/c).
[[nodiscard]] JacobianEntries brusselator_jacobian(const BrusselatorParams& params);

/// Trace < 0 and determinant > 0.
[[nodiscard]] bool isolated_stability(const JacobianEntries& j);

/// Newton failure; carries the last iterate.
class EquilibriumNotFound : public std::runtime_error {
public:
    EquilibriumNotFound(const std::string& message, Equilibrium last)
        : std::runtime_error(message), last_(last) {}
    [[nodiscard]] Equilibrium last_iterate() const { return last_; }

private:
    Equilibrium last_;
};

struct NewtonOptions {
    double residual_tolerance = 1e-10;
    int max_iterations = 100;
};

/// Central differences with step h = 1e-6 (1 + |x|) in each variable.
[[nodiscard]] JacobianEntries finite_difference_jacobian(const Kinetics& f, const Kinetics& g, Equilibrium at);

/**
 * Model from arbitrary kinetics. The equilibrium is located by damped Newton
 * iteration from `initial_guess` (backtracking on the residual norm); the
 * Jacobian is taken by central differences.
 */
[[nodiscard]] ReactionModel generic_model(Kinetics f, Kinetics g, Equilibrium initial_guess,
                                          const NewtonOptions& options = {}, std::string name = "generic");

}  // namespace hyperstab
