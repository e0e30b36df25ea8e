#include <algorithm>
#include <cmath>
#include <numeric>

#include <catch_amalgamated.hpp>

#include "hyperstab/polynomial.hpp"
#include "hyperstab/random.hpp"

using namespace hyperstab;
using Catch::Approx;

namespace {

const Complex I{0.0, 1.0};

double residual_scale(const ComplexPolynomial& p) { return 1.0 + p.max_coefficient_magnitude(); }

// Smallest max-distance over all pairings of the two multisets (brute force).
double matching_error(std::vector<Complex> found, const std::vector<Complex>& expected) {
    std::vector<int> perm(found.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0;
        for (std::size_t k = 0; k < perm.size(); ++k)
            worst = std::max(worst, std::abs(found[perm[k]] - expected[k]));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST_CASE("evaluate uses Horner's scheme", "[polynomial]") {
    const ComplexPolynomial z2p1({1.0, 0.0, 1.0});
    CHECK(std::abs(evaluate(z2p1, I)) == 0.0);

    const ComplexPolynomial z4({1.0, 0.0, 0.0, 0.0, 0.0});
    const Complex v = evaluate(z4, {1.0, 1.0});
    CHECK(v.real() == -4.0);
    CHECK(v.imag() == 0.0);

    const ComplexPolynomial binom({1.0, 4.0, 6.0, 4.0, 1.0});
    CHECK(evaluate(binom, 0.0) == Complex{1.0, 0.0});
}

TEST_CASE("polynomial construction rejects invalid coefficients", "[polynomial]") {
    CHECK_THROWS_AS(ComplexPolynomial({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ComplexPolynomial({0.0, 1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(ComplexPolynomial({1.0, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(ComplexPolynomial({1.0, Complex{0.0, INFINITY}}), std::invalid_argument);
}

TEST_CASE("from_roots expands the product", "[polynomial]") {
    const std::vector<Complex> r{1.0, 2.0};
    const auto p = ComplexPolynomial::from_roots(r);
    REQUIRE(p.degree() == 2);
    CHECK(p.coefficients()[1] == Complex{-3.0, 0.0});
    CHECK(p.coefficients()[2] == Complex{2.0, 0.0});
}

TEST_CASE("roots of z^2 + 1 are +i and -i", "[polynomial]") {
    const ComplexPolynomial p({1.0, 0.0, 1.0});
    auto r = roots(p);
    REQUIRE(r.size() == 2);
    std::sort(r.begin(), r.end(), [](Complex a, Complex b) { return a.imag() < b.imag(); });
    CHECK(std::abs(r[0] + I) < 1e-12);
    CHECK(std::abs(r[1] - I) < 1e-12);
}

TEST_CASE("quadruple root of (z+1)^4", "[polynomial]") {
    const ComplexPolynomial p({1.0, 4.0, 6.0, 4.0, 1.0});
    const auto res = find_roots(p);
    REQUIRE(res.converged);
    REQUIRE(res.roots.size() == 4);
    for (const auto& r : res.roots) {
        // A fourfold root is only determined to about eps^(1/4).
        CHECK(std::abs(r + 1.0) < 1e-3);
        CHECK(std::abs(evaluate(p, r)) <= 1e-10 * residual_scale(p));
    }
}

TEST_CASE("quadruple complex root of (z+1+i)^4", "[polynomial]") {
    // (z + 1 + i)^4 = z^4 + (4+4i) z^3 + 12i z^2 + (-8+8i) z - 4
    const ComplexPolynomial p({1.0, Complex{4, 4}, Complex{0, 12}, Complex{-8, 8}, -4.0});
    const auto res = find_roots(p);
    REQUIRE(res.converged);
    for (const auto& r : res.roots) {
        CHECK(std::abs(r - Complex{-1, -1}) < 1e-3);
        CHECK(std::abs(evaluate(p, r)) <= 1e-10 * residual_scale(p));
    }
}

TEST_CASE("spectral abscissa examples", "[polynomial]") {
    CHECK(spectral_abscissa(ComplexPolynomial({1.0, 4.0, 6.0, 4.0, 1.0})) == Approx(-1.0).margin(1e-3));
    // (z - 1)(z + 2)^3 = z^4 + 5 z^3 + 6 z^2 - 4 z - 8
    CHECK(spectral_abscissa(ComplexPolynomial({1.0, 5.0, 6.0, -4.0, -8.0})) == Approx(1.0).margin(1e-10));
    CHECK(spectral_abscissa(ComplexPolynomial({1.0, 0.0, 1.0})) == Approx(0.0).margin(1e-12));
}

TEST_CASE("non-convergence returns the best iterate", "[polynomial]") {
    const ComplexPolynomial p({1.0, 5.0, 6.0, -4.0, -8.0});
    RootFinderOptions opts;
    opts.max_sweeps = 1;
    const auto res = find_roots(p, opts);
    CHECK_FALSE(res.converged);
    CHECK(res.roots.size() == 4);
    CHECK(res.max_residual > opts.residual_tolerance);
    try {
        (void)roots(p, opts);
        FAIL("expected RootFindingError");
    } catch (const RootFindingError& e) {
        CHECK(e.partial().roots.size() == 4);
        CHECK(e.partial().max_residual == res.max_residual);
    }
}

TEST_CASE("property: recovers random root multisets", "[polynomial][property]") {
    Rng rng(20240611);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int degree = 1 + static_cast<int>(rng() % 8);
        std::vector<Complex> expected;
        while (static_cast<int>(expected.size()) < degree) {
            const Complex z{uniform(rng, -3, 3), uniform(rng, -3, 3)};
            // Keep roots apart: clustered roots are ill-conditioned by nature.
            const bool far = std::all_of(expected.begin(), expected.end(),
                                         [&](const Complex& e) { return std::abs(e - z) > 0.1; });
            if (far)
                expected.push_back(z);
        }
        const auto p = ComplexPolynomial::from_roots(expected);
        const auto r = roots(p);
        INFO("trial " << trial << " degree " << degree);
        CHECK(matching_error(r, expected) <= 1e-7);
        ++checked;
    }
    CHECK(checked == 300);
}

TEST_CASE("property: abscissa is invariant under positive scaling", "[polynomial][property]") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Complex> c{1.0};
        for (int k = 0; k < 4; ++k)
            c.emplace_back(uniform(rng, -5, 5), uniform(rng, -5, 5));
        const ComplexPolynomial p(c);
        const double factor = std::exp(uniform(rng, -5, 5));
        CHECK(spectral_abscissa(p.scaled(factor)) == Approx(spectral_abscissa(p)).margin(1e-9));
    }
}

TEST_CASE("property: real coefficients give conjugate pairs", "[polynomial][property]") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Complex> c{1.0};
        const int degree = 2 + static_cast<int>(rng() % 7);
        for (int k = 0; k < degree; ++k)
            c.emplace_back(uniform(rng, -5, 5), 0.0);
        const auto r = roots(ComplexPolynomial(c));
        for (const auto& z : r) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& w : r)
                nearest = std::min(nearest, std::abs(std::conj(z) - w));
            CHECK(nearest <= 1e-8);
        }
    }
}

TEST_CASE("quartic conversion", "[polynomial]") {
    ComplexQuartic q;
    q.a = {4, 6, 4, 1};
    const auto p = q.to_polynomial();
    CHECK(p.degree() == 4);
    CHECK(ComplexQuartic::from_polynomial(p.scaled(3.0)) == q);
    CHECK(q.has_real_coefficients());
    q.b[2] = 1.0;
    CHECK_FALSE(q.has_real_coefficients());
}
