#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "trigbf/errors.hpp"
#include "trigbf/range_kernel.hpp"

#include <numbers>
#include <numeric>
#include <sstream>

using namespace trigbf;

TEST_CASE("degree estimate reproduces the formula row") {
    const std::vector<std::pair<double, int>> rows{{200, 1}, {150, 2}, {100, 3}, {80, 5},
                                                   {60, 8},  {50, 11}, {40, 17}};
    for (auto [sigma, n] : rows) {
        CAPTURE(sigma);
        CHECK(degree_estimate(sigma, 255.0) == n);
    }
}

TEST_CASE("select_degree") {
    CHECK(select_degree(80.0, 255.0, DegreeLookup::Table) == 4);
    CHECK(select_degree(40.0, 255.0, DegreeLookup::Table) == 9);
    CHECK(select_degree(200.0, 255.0, DegreeLookup::Table) == 1);
    CHECK(select_degree(80.0, 255.0) == 5);
    // Off-table sigma falls back to the ceiling formula.
    CHECK(select_degree(70.0, 255.0, DegreeLookup::Table) == degree_estimate(70.0, 255.0));
    // The table only describes T = 255.
    CHECK(select_degree(80.0, 200.0, DegreeLookup::Table) == degree_estimate(80.0, 200.0));
    // gamma sigma >= 1: the kernel is on the half period for every degree.
    CHECK(select_degree(200.0, 255.0) == kDefaultWideDegree);
    CHECK(select_degree(1000.0, 255.0) == kDefaultWideDegree);
    CHECK(select_degree(10.0, 255.0) == 264);
    CHECK_THROWS_AS(select_degree(0.0, 255.0), ParameterError);
    CHECK_THROWS_AS(select_degree(10.0, -1.0), ParameterError);
}

TEST_CASE("make_trig_kernel coefficients and frequencies") {
    SUBCASE("degree 2") {
        const TrigKernel k = make_trig_kernel(80.0, 255.0, 2);
        REQUIRE(k.coeffs.size() == 3);
        CHECK(k.coeffs[0] == 0.25);
        CHECK(k.coeffs[1] == 0.5);
        CHECK(k.coeffs[2] == 0.25);
        CHECK(k.freqs[0] == doctest::Approx(-2.0 * k.omega));
        CHECK(k.freqs[1] == 0.0);
        CHECK(k.freqs[2] == doctest::Approx(2.0 * k.omega));
    }
    SUBCASE("degree 1 is a plain cosine") {
        const TrigKernel k = make_trig_kernel(80.0, 255.0, 1);
        CHECK(k.coeffs == std::vector<double>{0.5, 0.5});
        CHECK(k.freqs[0] == -k.freqs[1]);
        for (double s : {-200.0, -3.0, 0.0, 17.0, 255.0}) CHECK(k(s) == doctest::Approx(std::cos(k.omega * s)));
    }
    SUBCASE("table lookup at sigma 80") {
        const TrigKernel k = make_trig_kernel(80.0, 255.0, std::nullopt, DegreeLookup::Table);
        CHECK(k.N == 4);
        CHECK(k.coeffs.size() == 5);
        CHECK(k.gamma == doctest::Approx(std::numbers::pi / 510.0));
        CHECK(k.rho == doctest::Approx(std::numbers::pi * 80.0 / 510.0));
        CHECK(k.omega == doctest::Approx(k.gamma / (k.rho * 2.0)));
    }
    SUBCASE("degree 0 is the constant kernel") {
        const TrigKernel k = make_trig_kernel(80.0, 255.0, 0);
        CHECK(k.coeffs == std::vector<double>{1.0});
        CHECK(k(123.0) == 1.0);
    }
    CHECK_THROWS_AS(make_trig_kernel(-1.0, 255.0), ParameterError);
    CHECK_THROWS_AS(make_trig_kernel(10.0, 0.0), ParameterError);
    CHECK_THROWS_AS(make_trig_kernel(10.0, 255.0, -2), ParameterError);
}

TEST_CASE("trig kernel invariants over degrees and widths") {
    for (int n = 1; n <= 12; ++n) {
        for (double sigma : {20.0, 60.0, 150.0}) {
            const TrigKernel k = make_trig_kernel(sigma, 255.0, n);
            CHECK(std::accumulate(k.coeffs.begin(), k.coeffs.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
            for (std::size_t i = 0; i < k.coeffs.size(); ++i) {
                CHECK(k.coeffs[i] > 0.0);
                CHECK(k.coeffs[i] == k.coeffs[k.coeffs.size() - 1 - i]);
                CHECK(k.freqs[i] == -k.freqs[k.freqs.size() - 1 - i]);
            }
            CHECK(trig_eval(k, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
            if (k.monotone_on_range()) CHECK(std::abs(k.omega * 255.0) <= std::numbers::pi / 2 + 1e-12);
        }
    }
}

TEST_CASE("trig_eval equals the power of a cosine") {
    for (int n : {1, 2, 3, 4, 7, 10}) {
        const TrigKernel k = make_trig_kernel(60.0, 255.0, n);
        for (int i = 0; i < 1000; ++i) {
            const double s = -255.0 + 510.0 * i / 999.0;
            CHECK(std::abs(trig_eval(k, s) - std::pow(std::cos(k.omega * s), n)) < 1e-12);
        }
    }
    // rho sqrt(N) = 1 puts s = T at the half-period endpoint.
    const TrigKernel k = make_raised_cosine(255.0, 1.0, 1);
    CHECK(std::abs(trig_eval(k, 255.0)) < 1e-15);
}

TEST_CASE("non-negativity and monotonicity on the half period") {
    for (int n = 1; n <= 10; ++n) {
        for (double rho : {1.0, 1.3, 2.5}) {
            const TrigKernel k = make_raised_cosine(255.0, rho / std::sqrt(static_cast<double>(n)), n);
            REQUIRE(k.monotone_on_range());
            double prev = trig_eval(k, 0.0);
            for (int i = 1; i <= 2000; ++i) {
                const double s = 255.0 * i / 2000.0;
                const double v = trig_eval(k, s);
                CHECK(v >= -1e-15);
                CHECK(v <= prev + 1e-15);
                CHECK(trig_eval(k, -s) == doctest::Approx(v).epsilon(1e-12));
                prev = v;
            }
        }
    }
}

TEST_CASE("gaussian_eval") {
    CHECK(gaussian_eval(10.0, 0.0) == 1.0);
    CHECK(gaussian_eval(10.0, 10.0) == doctest::Approx(0.60653065971));
    CHECK(gaussian_eval(7.0, -3.0) == gaussian_eval(7.0, 3.0));
}

TEST_CASE("taylor kernel") {
    CHECK(make_taylor_kernel(5.0, 1).coeffs_even == std::vector<double>{1.0});
    const PolyKernel p = make_taylor_kernel(80.0, 3);
    REQUIRE(p.terms() == 3);
    CHECK(p.coeffs_even[0] == 1.0);
    CHECK(p.coeffs_even[1] == doctest::Approx(-1.0 / 12800.0).epsilon(1e-15));
    CHECK(p.coeffs_even[2] == doctest::Approx(1.0 / 327680000.0).epsilon(1e-15));
    for (int terms = 1; terms < 6; ++terms) CHECK(poly_eval(make_taylor_kernel(30.0, terms), 0.0) == 1.0);
    CHECK(poly_eval(p, 10.0) == doctest::Approx(1.0 - 100.0 / 12800.0 + 1e4 / 327680000.0));
    CHECK_THROWS_AS(make_taylor_kernel(80.0, 0), ParameterError);
    CHECK_THROWS_AS(make_taylor_kernel(0.0, 2), ParameterError);
}

TEST_CASE("sup_error") {
    CHECK(sup_error([](double s) { return gaussian_eval(80.0, s); }, 80.0, 255.0) == 0.0);
    CHECK_THROWS_AS(sup_error([](double) { return 1.0; }, 80.0, 255.0, 1), ParameterError);

    const TrigKernel trig = make_trig_kernel(80.0, 255.0, 4);
    const PolyKernel taylor = make_taylor_kernel(80.0, 3);
    const double trig_err = sup_error(trig, 80.0, 255.0, 10001);
    const double taylor_err = sup_error(taylor, 80.0, 255.0, 10001);
    // Dense-grid value, frozen from an independent numpy evaluation.
    CHECK(trig_err == doctest::Approx(0.05021970503591473).epsilon(1e-9));
    CHECK(trig_err < taylor_err);

    bool blows_up = false;
    for (int i = 0; i <= 1550; ++i) {
        const double s = 100.0 + 155.0 * i / 1550.0;
        blows_up |= std::abs(poly_eval(taylor, s) - gaussian_eval(80.0, s)) > 1.0;
    }
    CHECK(blows_up);
}

TEST_CASE("raised cosines converge to the gaussian") {
    const double T = 255.0;
    const double sigma = 2.0 * T / std::numbers::pi;  // rho = 1
    double prev = 1e9;
    for (int n : {4, 8, 16, 32}) {
        const double err = sup_error(make_raised_cosine(T, 1.0, n), sigma, T);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("kernel curve csv") {
    KernelCurveSpec spec;
    spec.trig = make_trig_kernel(80.0, 255.0, 4);
    spec.taylor = make_taylor_kernel(80.0, 3);
    spec.grid_points = 5;
    std::ostringstream os;
    write_kernel_curves(os, spec);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "s,trig_value,gaussian_value,taylor_value");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 5);
    // Middle row sits at s = 0.
    CHECK(os.str().find("\n0,1,1,1\n") != std::string::npos);
}
