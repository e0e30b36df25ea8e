#include "hyperstab/rh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyperstab {

bool RHTable::is_finite() const {
    const double cells[] = {a1_1, b2_1, a3_1, b4_1, b1_1, a2_1, b3_1, a4_1, a2_2, b3_2,
                            a4_2, b2_2, a3_2, b4_2, a3_3, b4_3, b3_3, a4_3, a4_4};
    return std::all_of(std::begin(cells), std::end(cells), [](double x) { return std::isfinite(x); });
}

RHTable build_table(const ComplexQuartic& q) {
    const auto [a1, a2, a3, a4] = q.a;
    const auto [b1, b2, b3, b4] = q.b;

    RHTable t;
    t.a1_1 = a1;
    t.b2_1 = b2;
    t.a3_1 = a3;
    t.b4_1 = b4;
    t.b1_1 = a1 * b1 - b2;
    t.a2_1 = a1 * a2 - a3;
    t.b3_1 = a1 * b3 - b4;
    t.a4_1 = a1 * a4;

    t.a2_2 = a1 * t.a2_1 + t.b1_1 * b2;
    t.b3_2 = a1 * t.b3_1 - t.b1_1 * a3;
    t.a4_2 = a1 * t.a4_1 + t.b1_1 * b4;
    t.b2_2 = t.a2_2 * b2 - a1 * t.b3_2;
    t.a3_2 = t.a2_2 * a3 - a1 * t.a4_2;
    t.b4_2 = t.a2_2 * b4;

    t.a3_3 = t.a2_2 * t.a3_2 + t.b2_2 * t.b3_2;
    t.b4_3 = t.a2_2 * t.b4_2 - t.b2_2 * t.a4_2;
    t.b3_3 = t.a3_3 * t.b3_2 - t.a2_2 * t.b4_3;
    t.a4_3 = t.a3_3 * t.a4_2;

    t.a4_4 = t.a3_3 * t.a4_3 + t.b3_3 * t.b4_3;
    return t;
}

StabilityVerdict verdict_from_table(const RHTable& table) {
    StabilityVerdict v;
    v.pivots = table.pivots();
    v.margin = *std::min_element(v.pivots.begin(), v.pivots.end());
    for (int k = 0; k < 4; ++k) {
        // NaN compares false, so overflowed tables never pass.
        if (!(v.pivots[k] > 0.0) || !std::isfinite(v.pivots[k])) {
            v.failing_index = k + 1;
            break;
        }
    }
    v.stable = !v.failing_index.has_value();
    if (!std::isfinite(v.margin))
        v.margin = std::isnan(v.margin) ? -std::numeric_limits<double>::infinity() : v.margin;
    return v;
}

StabilityVerdict is_stable(const ComplexQuartic& q) {
    if (!q.is_finite())
        throw std::invalid_argument("quartic coefficients must be finite");
    return verdict_from_table(build_table(q));
}

bool classical_hurwitz_stable(const ComplexQuartic& q) {
    const auto [a1, a2, a3, a4] = q.a;
    const double h2 = a1 * a2 - a3;
    return a1 > 0.0 && h2 > 0.0 && h2 * a3 - a1 * a1 * a4 > 0.0 && a4 > 0.0;
}

PropositionConditions proposition_conditions(const ComplexQuartic& q, double epsilon,
                                             const ClosedFormInputs& in) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    const auto [a1, a2, a3, a4] = q.a;
    const auto [b1, b2, b3, b4] = q.b;
    (void)a2;
    (void)b1;

    const double tu = in.tau_u, tv = in.tau_v;
    const double re = in.lambda_re, im = in.lambda_im;
    const double dsum = in.D_u + in.D_v;

    PropositionConditions c;
    c.upsilon = epsilon * (tu + tv) *
                    (tu + tv - in.g_v * tu * tu - in.f_u * tv * tv - tu * tu * in.D_v * re -
                     tv * tv * in.D_u * re) -
                im * dsum * dsum;
    c.alpha = epsilon * epsilon * c.upsilon;
    c.beta = a1 * (a1 * b3 - b4) + a3 * b2;
    const double alpha = c.alpha, beta = c.beta;
    c.gamma = alpha * (a3 * alpha - a1 * a1 * a1 * a4 + a1 * b2 * b4) + (alpha * b2 - a1 * beta) * beta;
    const double gamma = c.gamma;
    c.cond3 = (gamma * beta - alpha) * (alpha * alpha * b4 - (a1 * a1 * b4 - b2 * b4) * (alpha * b2 - a1 * beta)) +
              (a1 * a1 * a4 - b2 * b4) * gamma * gamma;
    return c;
}

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

bool ConditionComparison::any_disagreement() const {
    return table_stable != closed_form_stable ||
           std::any_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return !c.sign_agrees; });
}

ConditionComparison compare_with_table(const PropositionConditions& conditions, const RHTable& table) {
    ConditionComparison out{
        {ConditionCheck{"upsilon", "a2_2", conditions.upsilon, table.a2_2,
                        sign_of(conditions.upsilon) == sign_of(table.a2_2)},
         ConditionCheck{"gamma", "a3_3", conditions.gamma, table.a3_3,
                        sign_of(conditions.gamma) == sign_of(table.a3_3)},
         ConditionCheck{"cond3", "a4_4", conditions.cond3, table.a4_4,
                        sign_of(conditions.cond3) == sign_of(table.a4_4)}},
        verdict_from_table(table).stable,
        conditions.upsilon > 0.0 && conditions.gamma > 0.0 && conditions.cond3 > 0.0,
        std::abs(conditions.alpha - table.a2_2) / std::max(1.0, std::abs(table.a2_2))};
    return out;
}

}  // namespace hyperstab
