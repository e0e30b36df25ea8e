#include <cmath>

#include <catch_amalgamated.hpp>

#include "hyperstab/scan.hpp"

using namespace hyperstab;
using Catch::Approx;

namespace {

const BrusselatorParams kBruss{1.3, 14.0};
const TransportParams kTransport{0.5, 0.5, 2.0, 1.0};

}  // namespace

TEST_CASE("axis coordinates", "[scan]") {
    const AxisSpec a{"b", 0.5, 2.5, 5};
    CHECK(a.value(0) == 0.5);
    CHECK(a.value(2) == 1.5);
    CHECK(a.value(4) == 2.5);
    CHECK_THROWS_AS((AxisSpec{"b", 1, 1, 5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((AxisSpec{"b", 0, 1, 1}.validate()), std::invalid_argument);
}

TEST_CASE("parameter names", "[scan]") {
    for (const char* name : {"b", "c", "tau_u", "tau_v", "D_u", "D_v", "Lambda_Re", "Lambda_Im"})
        CHECK(to_string(parse_scan_parameter(name)) == name);
    CHECK_THROWS_AS(parse_scan_parameter("tau"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scan_parameter("B"), std::invalid_argument);
}

TEST_CASE("Lambda plane without diffusion is uniform", "[scan]") {
    const auto map = scan_lambda_plane(brusselator_jacobian(kBruss), {0.0, 0.0, 2.0, 1.0}, {-5, 0}, {-3, 3}, 9);
    for (const auto& c : map.cells)
        CHECK(c == map.cells.front());
    CHECK(map.cells.front().stable);
}

TEST_CASE("Lambda plane at the figure parameters", "[scan]") {
    const auto j = brusselator_jacobian(kBruss);
    const auto map = scan_lambda_plane(j, kTransport, {-4, 0}, {-3, 3}, 25);
    REQUIRE(map.cells.size() == 625);

    SECTION("real axis is stable, some complex points are not") {
        for (int i = 0; i < 25; ++i)
            CHECK(map.at(i, 12).stable);
        CHECK(map.stable_count() < map.cells.size());
        CHECK(map.stable_count() > 0);
    }
    SECTION("stable exactly when the smallest pivot is positive") {
        for (const auto& c : map.cells)
            CHECK(c.stable == (c.margin > 0));
    }
    SECTION("verdict agrees with the growth rate away from the boundary") {
        for (const auto& c : map.cells)
            if (std::abs(c.growth_rate) > 1e-6)
                CHECK(c.stable == (c.growth_rate < 0));
    }
    SECTION("symmetric under Lambda_Im -> -Lambda_Im") {
        for (int i = 0; i < 25; ++i) {
            for (int k = 0; k < 25; ++k) {
                const auto& a = map.at(i, k);
                const auto& b = map.at(i, 24 - k);
                CHECK(a.growth_rate == Approx(b.growth_rate).margin(1e-9));
                if (std::abs(a.growth_rate) > 1e-6)
                    CHECK(a.stable == b.stable);
            }
        }
    }
    SECTION("refined grid contains the coarse grid exactly") {
        const auto fine = scan_lambda_plane(j, kTransport, {-4, 0}, {-3, 3}, 49);
        for (int i = 0; i < 25; ++i)
            for (int k = 0; k < 25; ++k)
                CHECK(fine.at(2 * i, 2 * k) == map.at(i, k));
    }
    SECTION("thread count does not change the result") {
        CHECK(scan_lambda_plane(j, kTransport, {-4, 0}, {-3, 3}, 25, {1}).cells == map.cells);
    }
}

TEST_CASE("Lambda plane rejects a positive real part", "[scan]") {
    CHECK_THROWS_AS(scan_lambda_plane(brusselator_jacobian(kBruss), kTransport, {-1, 0.5}, {-1, 1}, 5),
                    std::invalid_argument);
}

TEST_CASE("parameter plane", "[scan]") {
    const std::vector<Complex> samples{Complex{0.0, 0.0}};

    SECTION("b-c plane at Lambda = 0 with small inertia follows b < 1 + c") {
        const TransportParams t{0.0, 0.0, 1e-3, 1e-3};
        const auto map = scan_parameter_plane(ScanModel::from_brusselator(kBruss), t, {"b", 0.1, 4.1, 21},
                                              {"c", 0.15, 3.15, 11}, samples);
        for (int i = 0; i < 21; ++i) {
            for (int k = 0; k < 11; ++k) {
                const double b = map.axis1.value(i), c = map.axis2.value(k);
                INFO("b=" << b << " c=" << c);
                CHECK(map.at(i, k).stable == (b < 1.0 + c));
            }
        }
        CHECK(map.stable_count() > 0);
        CHECK(map.stable_count() < map.cells.size());
    }
    SECTION("margin changes sign across the boundary along b") {
        const TransportParams t{0.0, 0.0, 1e-3, 1e-3};
        const auto map = scan_parameter_plane(ScanModel::from_brusselator({1.0, 1.0}), t, {"b", 0.5, 3.5, 31},
                                              {"tau_u", 1e-3, 2e-3, 2}, samples);
        CHECK(map.at(0, 0).margin > 0);
        CHECK(map.at(30, 0).margin <= 0);
    }
    SECTION("Lambda axes override the sample") {
        const auto j = brusselator_jacobian(kBruss);
        const auto plane = scan_parameter_plane(ScanModel::from_jacobian(j), kTransport, {"Lambda_Re", -4, 0, 9},
                                                {"Lambda_Im", -3, 3, 9}, samples);
        const auto direct = scan_lambda_plane(j, kTransport, {-4, 0}, {-3, 3}, 9);
        CHECK(plane.cells == direct.cells);
    }
    SECTION("several samples combine by conjunction") {
        const std::vector<Complex> two{Complex{-1.0, 0.0}, Complex{-1.5, 2.0}};
        const auto map = scan_parameter_plane(ScanModel::from_brusselator(kBruss), kTransport, {"tau_u", 1.9, 2.1, 2},
                                              {"D_u", 0.4, 0.6, 2}, two);
        const auto only_first = scan_parameter_plane(ScanModel::from_brusselator(kBruss), kTransport,
                                                     {"tau_u", 1.9, 2.1, 2}, {"D_u", 0.4, 0.6, 2},
                                                     std::span<const Complex>(two.data(), 1));
        for (std::size_t k = 0; k < map.cells.size(); ++k) {
            if (map.cells[k].stable)
                CHECK(only_first.cells[k].stable);
            CHECK(map.cells[k].margin <= only_first.cells[k].margin);
        }
    }
    SECTION("invalid requests") {
        const auto bruss = ScanModel::from_brusselator(kBruss);
        CHECK_THROWS_AS(scan_parameter_plane(bruss, kTransport, {"b", 0.5, 1, 3}, {"c", 1, 2, 3}, {}),
                        std::invalid_argument);
        CHECK_THROWS_AS(scan_parameter_plane(bruss, kTransport, {"b", 0.5, 1, 3}, {"b", 1, 2, 3}, samples),
                        std::invalid_argument);
        CHECK_THROWS_AS(scan_parameter_plane(ScanModel::from_jacobian(brusselator_jacobian(kBruss)), kTransport,
                                             {"b", 0.5, 1, 3}, {"c", 1, 2, 3}, samples),
                        std::invalid_argument);
        CHECK_THROWS_AS(scan_parameter_plane(bruss, kTransport, {"tau_u", -1, 1, 3}, {"c", 1, 2, 3}, samples),
                        std::invalid_argument);
        CHECK_THROWS_AS(scan_parameter_plane(bruss, kTransport, {"b", -1, 1, 3}, {"c", 1, 2, 3}, samples),
                        std::invalid_argument);
    }
}

TEST_CASE("region CSV round trip", "[scan][io]") {
    auto map = scan_lambda_plane(brusselator_jacobian(kBruss), kTransport, {-4, 0}, {-3, 3}, 7);
    map.cells[3].growth_rate = std::numeric_limits<double>::quiet_NaN();
    map.cells[4].margin = -std::numeric_limits<double>::infinity();
    const std::string csv = write_region_csv(map);
    CHECK(csv.rfind("axis1,axis2,stable,margin,growth_rate\n", 0) == 0);
    const auto back = read_region_csv(csv);
    CHECK(back.axis1.name == "axis1");
    CHECK(back.axis1.resolution == 7);
    CHECK(back.axis2.min == -3);
    REQUIRE(back.cells.size() == map.cells.size());
    for (std::size_t k = 0; k < map.cells.size(); ++k) {
        CHECK(back.cells[k].stable == map.cells[k].stable);
        if (k == 3) {
            CHECK(std::isnan(back.cells[k].growth_rate));
            continue;
        }
        CHECK(back.cells[k].margin == map.cells[k].margin);
        CHECK(back.cells[k].growth_rate == map.cells[k].growth_rate);
    }
    CHECK(write_region_csv(back) == csv);

    CHECK_THROWS_AS(read_region_csv(""), std::runtime_error);
    CHECK_THROWS_AS(read_region_csv("axis1,axis2,stable,margin,growth_rate\n0,0,2,1,1\n"), std::runtime_error);
}

TEST_CASE("region SVG", "[scan][io]") {
    const auto map = scan_lambda_plane(brusselator_jacobian(kBruss), kTransport, {-4, 0}, {-3, 3}, 5);
    const std::vector<SvgOverlay> overlays{{{{-1.0, 0.5}, {-2.0, -0.5}}, "#000000", "spectrum"}};
    const std::string svg = write_region_svg(map, overlays);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("spectrum") != std::string::npos);
}
