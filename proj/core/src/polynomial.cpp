#include "hyperstab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hyperstab {

ComplexPolynomial::ComplexPolynomial(std::vector<Complex> coefficients)
    : coefficients_(std::move(coefficients)) {
    if (coefficients_.size() < 2)
        throw std::invalid_argument("polynomial degree must be at least 1");
    for (const auto& c : coefficients_)
        if (!is_finite(c))
            throw std::invalid_argument("polynomial coefficients must be finite");
    if (coefficients_.front() == Complex{})
        throw std::invalid_argument("leading coefficient must be nonzero");
}

ComplexPolynomial ComplexPolynomial::from_roots(std::span<const Complex> roots) {
    std::vector<Complex> c{1.0};
    for (const auto& r : roots) {
        c.push_back(0.0);
        for (std::size_t k = c.size() - 1; k > 0; --k)
            c[k] -= r * c[k - 1];
    }
    return ComplexPolynomial(std::move(c));
}

double ComplexPolynomial::max_coefficient_magnitude() const {
    double m = 0.0;
    for (const auto& c : coefficients_)
        m = std::max(m, std::abs(c));
    return m;
}

ComplexPolynomial ComplexPolynomial::scaled(Complex factor) const {
    auto c = coefficients_;
    for (auto& x : c)
        x *= factor;
    return ComplexPolynomial(std::move(c));
}

ComplexPolynomial ComplexPolynomial::operator*(const ComplexPolynomial& other) const {
    const auto& p = coefficients_;
    const auto& q = other.coefficients_;
    std::vector<Complex> r(p.size() + q.size() - 1, Complex{});
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            r[i + j] += p[i] * q[j];
    return ComplexPolynomial(std::move(r));
}

bool ComplexQuartic::is_finite() const {
    return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); }) &&
           std::all_of(b.begin(), b.end(), [](double x) { return std::isfinite(x); });
}

ComplexPolynomial ComplexQuartic::to_polynomial() const {
    return ComplexPolynomial({1.0, coefficient(1), coefficient(2), coefficient(3), coefficient(4)});
}

ComplexQuartic ComplexQuartic::from_polynomial(const ComplexPolynomial& p) {
    if (p.degree() != 4)
        throw std::invalid_argument("quartic requires a degree-4 polynomial");
    ComplexQuartic q;
    for (int j = 1; j <= 4; ++j) {
        const Complex c = p.coefficients()[j] / p.leading();
        q.a[j - 1] = c.real();
        q.b[j - 1] = c.imag();
    }
    return q;
}

Complex evaluate(const ComplexPolynomial& p, Complex z) {
    Complex acc{};
    for (const auto& c : p.coefficients())
        acc = acc * z + c;
    return acc;
}

namespace {

std::string describe_failure(const RootsResult& r) {
    std::ostringstream os;
    os << "root finder did not converge after " << r.sweeps << " sweeps (max residual "
       << r.max_residual << ")";
    return os.str();
}

struct HornerResult {
    Complex value;
    Complex derivative;
    double error_bound;  // sum_k |c_k| |z|^k, scale of the rounding error in value
};

HornerResult horner_with_derivative(std::span<const Complex> c, Complex z) {
    Complex p = c[0];
    Complex dp{};
    double bound = std::abs(c[0]);
    const double az = std::abs(z);
    for (std::size_t k = 1; k < c.size(); ++k) {
        dp = dp * z + p;
        p = p * z + c[k];
        bound = bound * az + std::abs(c[k]);
    }
    return {p, dp, bound};
}

}  // namespace

RootFindingError::RootFindingError(RootsResult partial)
    : std::runtime_error(describe_failure(partial)), partial_(std::move(partial)) {}

RootsResult find_roots(const ComplexPolynomial& p, const RootFinderOptions& options) {
    const int n = p.degree();
    std::vector<Complex> c = p.coefficients();
    const Complex lead = c.front();
    for (auto& x : c)
        x /= lead;

    double max_coef = 0.0;
    for (std::size_t k = 1; k < c.size(); ++k)
        max_coef = std::max(max_coef, std::abs(c[k]));
    const double radius = 1.0 + max_coef;
    const double scale = 1.0 + std::max(1.0, max_coef);

    RootsResult result;
    result.roots.resize(n);
    // The angular offset keeps the start points off the real axis so that
    // real-coefficient problems can split into conjugate pairs.
    constexpr double offset = 0.4;
    for (int k = 0; k < n; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / n + offset;
        result.roots[k] = std::polar(radius, theta);
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double rounding = 4.0 * (n + 1) * eps;
    std::vector<bool> frozen(n, false);
    auto& z = result.roots;

    int sweep = 0;
    for (; sweep < options.max_sweeps; ++sweep) {
        bool all_frozen = true;
        for (int i = 0; i < n; ++i) {
            if (frozen[i])
                continue;
            const auto h = horner_with_derivative(c, z[i]);
            if (std::abs(h.value) <= rounding * h.error_bound) {
                frozen[i] = true;
                continue;
            }
            all_frozen = false;
            Complex sum{};
            for (int j = 0; j < n; ++j)
                if (j != i)
                    sum += 1.0 / (z[i] - z[j]);
            Complex step;
            if (h.derivative == Complex{}) {
                step = Complex{1e-3 * radius, 1e-3 * radius};
            } else {
                const Complex ratio = h.value / h.derivative;
                const Complex denom = 1.0 - ratio * sum;
                step = denom == Complex{} ? ratio : ratio / denom;
            }
            if (!is_finite(step))
                step = Complex{1e-3 * radius, 0.0};
            z[i] -= step;
        }
        if (all_frozen)
            break;
    }
    result.sweeps = sweep;

    double worst = 0.0;
    for (const auto& r : z) {
        Complex v = c[0];
        for (std::size_t k = 1; k < c.size(); ++k)
            v = v * r + c[k];
        worst = std::max(worst, std::abs(v) / scale);
    }
    result.max_residual = worst;
    result.converged = std::isfinite(worst) && worst <= options.residual_tolerance &&
                       std::all_of(z.begin(), z.end(), [](const Complex& r) { return is_finite(r); });
    return result;
}

std::vector<Complex> roots(const ComplexPolynomial& p, const RootFinderOptions& options) {
    auto result = find_roots(p, options);
    if (!result.converged)
        throw RootFindingError(std::move(result));
    return std::move(result.roots);
}

double spectral_abscissa(const ComplexPolynomial& p, const RootFinderOptions& options) {
    const auto r = roots(p, options);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& x : r)
        best = std::max(best, x.real());
    return best;
}

}  // namespace hyperstab
