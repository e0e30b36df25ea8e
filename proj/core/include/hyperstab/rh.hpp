#pragma once

/**
 * Generalized Routh-Hurwitz test for monic quartics with complex coefficients.
 *
 * The table is built row by row from two-by-two determinants. The quartic
 * z^4 + sum (a_j + i b_j) z^{4-j} has all its roots in the open left half
 * plane if and only if the four first-column entries a1_1, a2_2, a3_3, a4_4
 * are strictly positive.
 */

#include <array>
#include <optional>

#include "hyperstab/polynomial.hpp"

namespace hyperstab {

/// Cells of the quartic table. `xk_r` is the entry x_k at reduction step r.
struct RHTable {
    // step 1
    double a1_1 = 0, b2_1 = 0, a3_1 = 0, b4_1 = 0;
    double b1_1 = 0, a2_1 = 0, b3_1 = 0, a4_1 = 0;
    // step 2
    double a2_2 = 0, b3_2 = 0, a4_2 = 0;
    double b2_2 = 0, a3_2 = 0, b4_2 = 0;
    // step 3
    double a3_3 = 0, b4_3 = 0;
    double b3_3 = 0, a4_3 = 0;
    // step 4
    double a4_4 = 0;

    [[nodiscard]] std::array<double, 4> pivots() const { return {a1_1, a2_2, a3_3, a4_4}; }
    [[nodiscard]] bool is_finite() const;

    friend bool operator==(const RHTable&, const RHTable&) = default;
};

struct StabilityVerdict {
    bool stable = false;
    std::array<double, 4> pivots{};
    /// min(pivots); positive exactly when stable.
    double margin = 0.0;
    /// 1-based index of the first non-positive pivot.
    std::optional<int> failing_index;
};

/// Builds every cell in order; each row reads only the quartic and earlier rows.
[[nodiscard]] RHTable build_table(const ComplexQuartic& q);

/// Strict positivity of the four pivots. Non-finite pivots count as failing.
[[nodiscard]] StabilityVerdict verdict_from_table(const RHTable& table);

/// Throws std::invalid_argument on non-finite coefficients.
[[nodiscard]] StabilityVerdict is_stable(const ComplexQuartic& q);

/**
 * Classical Hurwitz conditions for a real monic quartic:
 * a1 > 0, a1 a2 - a3 > 0, (a1 a2 - a3) a3 - a1^2 a4 > 0, a4 > 0.
 * Only meaningful when all b_j vanish.
 */
[[nodiscard]] bool classical_hurwitz_stable(const ComplexQuartic& q);

/// Inputs to the closed-form diagnostic conditions.
struct ClosedFormInputs {
    double tau_u = 0, tau_v = 0;
    double f_u = 0, g_v = 0;
    double D_u = 0, D_v = 0;
    double lambda_re = 0, lambda_im = 0;
};

/**
 * Closed-form stability conditions for the dispersion quartic, evaluated
 * exactly as commonly printed. Diagnostic only: the expressions disagree
 * with the table in places, and the table is authoritative.
 *
 *   upsilon = eps (tu+tv) [tu + tv - g_v tu^2 - f_u tv^2 - tu^2 D_v Re - tv^2 D_u Re]
 *             - Im (D_u + D_v)^2
 *   alpha   = eps^2 upsilon
 *   beta    = a1 (a1 b3 - b4) + a3 b2
 *   gamma   = alpha (a3 alpha - a1^3 a4 + a1 b2 b4) + (alpha b2 - a1 beta) beta
 *   cond3   = (gamma beta - alpha) [alpha^2 b4 - (a1^2 b4 - b2 b4)(alpha b2 - a1 beta)]
 *             + (a1^2 a4 - b2 b4) gamma^2
 */
struct PropositionConditions {
    double upsilon = 0;
    double alpha = 0;
    double beta = 0;
    double gamma = 0;
    double cond3 = 0;
};

/// Requires epsilon > 0.
[[nodiscard]] PropositionConditions proposition_conditions(const ComplexQuartic& q, double epsilon,
                                                           const ClosedFormInputs& inputs);

/// Sign comparison of one closed-form condition against its table pivot.
struct ConditionCheck {
    const char* name;        // "upsilon", "gamma", "cond3"
    const char* pivot_name;  // "a2_2", "a3_3", "a4_4"
    double closed_form;
    double pivot;
    bool sign_agrees;
};

struct ConditionComparison {
    std::array<ConditionCheck, 3> checks;
    bool table_stable;
    bool closed_form_stable;
    /// |alpha - a2_2| / max(1, |a2_2|)
    double alpha_vs_a2_2_relative_gap;

    [[nodiscard]] bool any_disagreement() const;
};

[[nodiscard]] ConditionComparison compare_with_table(const PropositionConditions& conditions,
                                                     const RHTable& table);

}  // namespace hyperstab
