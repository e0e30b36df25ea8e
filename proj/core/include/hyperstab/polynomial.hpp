#pragma once

/**
 * Complex polynomials and an Aberth-Ehrlich root finder.
 *
 * The root finder is the independent oracle used to cross-check the
 * Routh-Hurwitz verdicts: a polynomial is stable when its spectral abscissa
 * (largest real part over all roots) is negative.
 */

#include <array>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperstab {

using Complex = std::complex<double>;

[[nodiscard]] inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/**
 * Polynomial with complex coefficients, stored highest degree first.
 *
 * Construction rejects non-finite coefficients, a zero leading coefficient,
 * and degree < 1.
 */
class ComplexPolynomial {
public:
    explicit ComplexPolynomial(std::vector<Complex> coefficients);

    /// Monic polynomial prod_k (z - roots[k]).
    static ComplexPolynomial from_roots(std::span<const Complex> roots);

    [[nodiscard]] int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
    [[nodiscard]] const std::vector<Complex>& coefficients() const { return coefficients_; }
    [[nodiscard]] const Complex& leading() const { return coefficients_.front(); }

    /// max_k |c_k|
    [[nodiscard]] double max_coefficient_magnitude() const;

    /// Same polynomial multiplied through by `factor` (nonzero).
    [[nodiscard]] ComplexPolynomial scaled(Complex factor) const;

    /// Product of two polynomials.
    [[nodiscard]] ComplexPolynomial operator*(const ComplexPolynomial& other) const;

private:
    std::vector<Complex> coefficients_;
};

/**
 * Monic quartic  z^4 + sum_{j=1..4} (a_j + i b_j) z^{4-j}.
 *
 * a[0] holds a_1, so a[j-1] is the real part of the coefficient of z^{4-j}.
 */
struct ComplexQuartic {
    std::array<double, 4> a{};
    std::array<double, 4> b{};

    [[nodiscard]] Complex coefficient(int j) const { return {a[j - 1], b[j - 1]}; }
    [[nodiscard]] bool is_finite() const;
    [[nodiscard]] bool has_real_coefficients() const { return b == std::array<double, 4>{}; }
    [[nodiscard]] ComplexPolynomial to_polynomial() const;

    /// Normalises a degree-4 polynomial to monic form.
    static ComplexQuartic from_polynomial(const ComplexPolynomial& p);

    friend bool operator==(const ComplexQuartic&, const ComplexQuartic&) = default;
};

/// Horner evaluation.
[[nodiscard]] Complex evaluate(const ComplexPolynomial& p, Complex z);

struct RootFinderOptions {
    double residual_tolerance = 1e-10;
    int max_sweeps = 500;
};

/**
 * Outcome of the simultaneous root iteration.
 *
 * `roots` always holds the best iterate, even when `converged` is false.
 * `max_residual` is max_k |p(r_k)| / (1 + max |c_j|) with p made monic.
 */
struct RootsResult {
    std::vector<Complex> roots;
    double max_residual = 0.0;
    int sweeps = 0;
    bool converged = false;
};

/// Non-convergence of the root finder; carries the best iterate.
class RootFindingError : public std::runtime_error {
public:
    explicit RootFindingError(RootsResult partial);
    [[nodiscard]] const RootsResult& partial() const { return partial_; }

private:
    RootsResult partial_;
};

/**
 * Aberth-Ehrlich simultaneous iteration.
 *
 * Starts from equispaced points on the circle of radius 1 + max|c_j| (the
 * Cauchy bound of the monic polynomial). A root stops moving once |p(z)|
 * drops to the rounding level of the Horner evaluation at z. Multiple roots
 * come back as clusters of near-coincident values.
 */
[[nodiscard]] RootsResult find_roots(const ComplexPolynomial& p, const RootFinderOptions& options = {});

/// find_roots, throwing RootFindingError on non-convergence.
[[nodiscard]] std::vector<Complex> roots(const ComplexPolynomial& p, const RootFinderOptions& options = {});

/// max Re(r) over the roots of p.
[[nodiscard]] double spectral_abscissa(const ComplexPolynomial& p, const RootFinderOptions& options = {});

}  // namespace hyperstab
