#include <cmath>

#include <catch_amalgamated.hpp>

#include "hyperstab/dispersion.hpp"
#include "hyperstab/random.hpp"

using namespace hyperstab;
using Catch::Approx;

namespace {

const JacobianEntries kFig{0.3, 14.0, -1.3, -14.0};  // Brusselator b = 1.3, c = 14
const TransportParams kTransport{0.5, 0.5, 2.0, 1.0};

// Independent expansion: (tau_u s^2 + s - p)(tau_v s^2 + s - q) - f_v g_u,
// with p = f_u + D_u Lambda, q = g_v + D_v Lambda, divided by tau_u tau_v.
std::array<Complex, 5> oracle(const JacobianEntries& j, const TransportParams& t, Complex lambda) {
    const Complex p = j.f_u + t.D_u * lambda;
    const Complex q = j.g_v + t.D_v * lambda;
    const double tu = t.tau_u, tv = t.tau_v;
    std::array<Complex, 5> c{tu * tv, tu + tv, 1.0 - tu * q - tv * p, -(p + q), p * q - j.f_v * j.g_u};
    for (auto& x : c)
        x /= tu * tv;
    return c;
}

void check_against_oracle(const ComplexQuartic& q, const std::array<Complex, 5>& c, double tol) {
    for (int k = 1; k <= 4; ++k) {
        INFO("coefficient " << k);
        CHECK(std::abs(q.coefficient(k) - c[k]) <= tol * (1.0 + std::abs(c[k])));
    }
}

}  // namespace

TEST_CASE("homogeneous mode coefficients", "[dispersion]") {
    const auto q = build_quartic(kFig, kTransport, 0.0);
    const double eps = 0.5;
    CHECK(q.a[0] == Approx(eps * 3.0));
    CHECK(q.a[1] == Approx(eps * (1.0 + 14.0 * 2.0 - 0.3 * 1.0)));
    CHECK(q.a[2] == Approx(eps * 13.7));
    CHECK(q.a[3] == Approx(eps * 14.0));
    for (double b : q.b)
        CHECK(b == 0.0);
}

TEST_CASE("real eigenvalue Lambda = -1 at the figure parameters", "[dispersion]") {
    const auto q = build_quartic(kFig, kTransport, -1.0);
    CHECK(q.a[0] == Approx(1.5).epsilon(1e-14));
    CHECK(q.a[1] == Approx(15.1).epsilon(1e-14));
    CHECK(q.a[2] == Approx(7.35).epsilon(1e-14));
    CHECK(q.a[3] == Approx(10.55).epsilon(1e-14));
    const auto v = mode_verdict(kFig, kTransport, -1.0);
    CHECK(v.stable);
    REQUIRE(v.growth_rate);
    CHECK(*v.growth_rate == Approx(-0.23710522173708043).margin(1e-9));
}

TEST_CASE("complex eigenvalue Lambda = -1.5 + 2i is unstable", "[dispersion]") {
    const Complex lambda{-1.5, 2.0};
    const auto q = build_quartic(kFig, kTransport, lambda);
    CHECK(std::abs(q.coefficient(2) - Complex{15.475, -1.5}) < 1e-12);
    CHECK(std::abs(q.coefficient(3) - Complex{7.6, -1.0}) < 1e-12);
    CHECK(std::abs(q.coefficient(4) - Complex{11.91875, -7.6}) < 1e-12);
    const auto v = mode_verdict(kFig, kTransport, lambda);
    CHECK_FALSE(v.stable);
    REQUIRE(v.growth_rate);
    CHECK(*v.growth_rate == Approx(0.01450404).margin(1e-7));
}

TEST_CASE("no diffusion leaves only the kinetic part", "[dispersion]") {
    const TransportParams t{0.0, 0.0, 2.0, 1.0};
    CHECK(build_quartic(kFig, t, Complex{-3.0, 4.0}) == build_quartic(kFig, t, 0.0));
}

TEST_CASE("alternative closed form differs in a3, a4 and b4", "[dispersion]") {
    const auto diffs = closed_form_differences(kFig, kTransport, Complex{-1.5, 2.0});
    std::vector<std::string> names;
    for (const auto& d : diffs)
        names.push_back(d.name);
    CHECK(std::find(names.begin(), names.end(), "a3") != names.end());
    CHECK(std::find(names.begin(), names.end(), "b4") != names.end());
    for (const auto& d : diffs)
        CHECK(d.determinant_value != d.alternative_value);
}

TEST_CASE("invalid transport parameters", "[dispersion]") {
    CHECK_THROWS_AS(build_quartic(kFig, {0.5, 0.5, 0.0, 1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_quartic(kFig, {-0.1, 0.5, 1.0, 1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_quartic(kFig, kTransport, Complex{NAN, 0}), std::invalid_argument);
}

TEST_CASE("property: coefficients match an independent expansion", "[dispersion][property]") {
    Rng rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const JacobianEntries j{uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5)};
        const TransportParams t{uniform(rng, 0, 2), uniform(rng, 0, 2), uniform(rng, 0.05, 5), uniform(rng, 0.05, 5)};
        const Complex lambda{uniform(rng, -10, 0), uniform(rng, -5, 5)};
        check_against_oracle(build_quartic(j, t, lambda), oracle(j, t, lambda), 1e-12);
    }
}

TEST_CASE("property: roots of the quartic annihilate the determinant", "[dispersion][property]") {
    Rng rng(32);
    for (int trial = 0; trial < 300; ++trial) {
        const JacobianEntries j{uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3)};
        const TransportParams t{uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0.2, 3), uniform(rng, 0.2, 3)};
        const Complex lambda{uniform(rng, -5, 0), uniform(rng, -3, 3)};
        const auto q = build_quartic(j, t, lambda);
        for (const auto& s : roots(q.to_polynomial())) {
            // The matrix entries scale like tau |s|^2 + |s| + |J| + |D Lambda|.
            const double scale = std::pow(std::max(t.tau_u, t.tau_v) * std::norm(s) + std::abs(s) + 10.0, 2);
            CHECK(std::abs(dispersion_determinant(j, t, lambda, s)) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("property: conjugate eigenvalues give conjugate quartics", "[dispersion][property]") {
    Rng rng(33);
    for (int trial = 0; trial < 500; ++trial) {
        const JacobianEntries j{uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3)};
        const TransportParams t{uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0.2, 3), uniform(rng, 0.2, 3)};
        const Complex lambda{uniform(rng, -5, 0), uniform(rng, -3, 3)};
        const auto q = build_quartic(j, t, lambda);
        const auto qc = build_quartic(j, t, std::conj(lambda));
        for (int k = 0; k < 4; ++k) {
            CHECK(qc.a[k] == Approx(q.a[k]).margin(1e-12));
            CHECK(qc.b[k] == Approx(-q.b[k]).margin(1e-12));
        }
        const auto v = mode_verdict(j, t, lambda);
        const auto vc = mode_verdict(j, t, std::conj(lambda));
        if (v.growth_rate && std::abs(*v.growth_rate) > 1e-6)
            CHECK(v.stable == vc.stable);
    }
}

TEST_CASE("network verdict", "[dispersion]") {
    SECTION("two-node pair at the figure parameters is stable") {
        AdjacencyMatrix a(2);
        a.set_edge(0, 1, 1.0);
        a.set_edge(1, 0, 1.0);
        const auto v = network_verdict(kFig, kTransport, spectrum(directed_laplacian(a)));
        CHECK(v.stable);
        REQUIRE(v.modes.size() == 2);
        CHECK(std::abs(v.modes[v.homogeneous].eigenvalue) < 1e-12);
        REQUIRE(v.inhomogeneous_growth_rate);
        CHECK(*v.inhomogeneous_growth_rate < 0);
    }
    SECTION("directed small world destabilises the figure parameters") {
        const auto a = newman_watts_directed(50, 5, 0.02, 1);
        const auto v = network_verdict(kFig, kTransport, spectrum(directed_laplacian(a)));
        CHECK_FALSE(v.stable);
        REQUIRE(v.modes[v.dominant].growth_rate);
        CHECK(*v.modes[v.dominant].growth_rate > 0);
        CHECK(v.modes[v.homogeneous].stable);
    }
    SECTION("symmetrised network is stable") {
        const auto a = symmetrize(newman_watts_directed(50, 5, 0.02, 1));
        CHECK(network_verdict(kFig, kTransport, spectrum(directed_laplacian(a))).stable);
    }
    SECTION("empty spectrum is rejected") {
        CHECK_THROWS_AS(network_verdict(kFig, kTransport, LaplacianSpectrum{}), std::invalid_argument);
    }
}
