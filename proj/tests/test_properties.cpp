#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "trigbf/bilateral.hpp"
#include "trigbf/pnm.hpp"

using namespace trigbf;

namespace {

constexpr int kCases = 100;

SpatialSpec random_spatial(std::mt19937& gen) {
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_real_distribution<double> sigma(0.5, 6.0);
    switch (kind(gen)) {
        case 0: return SpatialSpec::box(std::uniform_int_distribution<int>(0, 5)(gen));
        case 1: return SpatialSpec::gaussian_fir(sigma(gen));
        default: return SpatialSpec::gaussian_recursive(sigma(gen));
    }
}

Image random_sized(std::mt19937& gen, bool integral = true) {
    std::uniform_int_distribution<int> dim(1, 24);
    return oracle::random_image(gen, dim(gen), dim(gen), 0, 255, integral);
}

}  // namespace

TEST_CASE("spatial filters have unit DC gain and are linear") {
    std::mt19937 gen(100);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int i = 0; i < kCases; ++i) {
        const SpatialSpec spec = random_spatial(gen);
        const Image a = random_sized(gen, false);
        const double level = coef(gen) * 50.0;
        const Image flat(a.width(), a.height(), 1, level);
        CHECK(oracle::max_abs_diff(spatial_filter(flat, spec), flat) < 1e-9);

        const Image b = oracle::random_image(gen, a.width(), a.height(), 0, 255, false);
        const double alpha = coef(gen);
        const double beta = coef(gen);
        std::vector<double> mix(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) mix[j] = alpha * a.samples()[j] + beta * b.samples()[j];
        const Image lhs = spatial_filter(Image(a.width(), a.height(), 1, std::move(mix)), spec);
        const Image fa = spatial_filter(a, spec);
        const Image fb = spatial_filter(b, spec);
        double worst = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            worst = std::max(worst, std::abs(lhs.samples()[j] - (alpha * fa.samples()[j] + beta * fb.samples()[j])));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("bilateral engines fix constants and preserve range") {
    std::mt19937 gen(200);
    std::uniform_real_distribution<double> sigma_r(10.0, 200.0);
    std::uniform_int_distribution<int> level(0, 255);
    for (int i = 0; i < kCases; ++i) {
        const SpatialSpec spec = random_spatial(gen);
        const Image img = random_sized(gen);
        const TrigKernel k = make_trig_kernel(sigma_r(gen), 255.0);
        if (k.N > 40) continue;  // keep the suite fast
        const Image out = bilateral_trig(img, spec, k);
        CHECK(min_sample(out) >= min_sample(img) - 1e-6);
        CHECK(max_sample(out) <= max_sample(img) + 1e-6);

        const Image flat(img.width(), img.height(), 1, level(gen));
        CHECK(oracle::max_abs_diff(bilateral_trig(flat, spec, k), flat) < 1e-8);
        CHECK(oracle::max_abs_diff(bilateral_direct(flat, spec, k), flat) < 1e-9);
        const PolyKernel p = make_taylor_kernel(k.rho / k.gamma, 3);
        CHECK(oracle::max_abs_diff(bilateral_poly(flat, spec, p), flat) < 1e-6);
    }
}

TEST_CASE("auxiliary images lie on the unit circle") {
    std::mt19937 gen(300);
    std::uniform_int_distribution<int> degree(1, 12);
    for (int i = 0; i < kCases; ++i) {
        const Image img = random_sized(gen);
        const auto set = build_auxiliary_images(img, make_trig_kernel(50.0, 255.0, degree(gen)));
        double worst = 0.0;
        for (const auto& t : set.terms) {
            for (std::size_t j = 0; j < img.size(); ++j) {
                const double c = t.cos_image.samples()[j];
                const double s = t.sin_image.samples()[j];
                worst = std::max(worst, std::abs(c * c + s * s - 1.0));
            }
        }
        CHECK(worst < 1e-14);
    }
}

TEST_CASE("pnm round trip for byte images") {
    std::mt19937 gen(400);
    for (int i = 0; i < kCases; ++i) {
        const Image img = random_sized(gen);
        CHECK(read_pnm(write_pnm(img)) == img);
    }
}
