#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sinespike/kernels.hpp"

using namespace sinespike;

TEST_CASE("dirichlet_eval: values, zeros and limits") {
    CHECK(dirichlet_eval(5, 0.0, 0) == 1.0);
    CHECK(std::abs(dirichlet_eval(5, 1.0 / 11.0, 0)) < 1e-15);
    const double expect = std::sin(0.5 * kPi) / (5.0 * std::sin(0.1 * kPi));
    CHECK(dirichlet_eval(2, 0.1, 0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(dirichlet_eval(2, 0.1, 0) == doctest::Approx(0.6472135955).epsilon(1e-10));
    CHECK(dirichlet_eval(7, 0.0, 1) == 0.0);
    CHECK(dirichlet_eval(7, 0.0, 3) == 0.0);
    CHECK(dirichlet_eval(7, 0.0, 2) == doctest::Approx(-4.0 * kPi * kPi * 7 * 8 / 3.0).epsilon(1e-14));
    CHECK(dirichlet_eval(7, 1.0, 2) == doctest::Approx(-4.0 * kPi * kPi * 7 * 8 / 3.0).epsilon(1e-12));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double f = U(rng);
        CHECK(dirichlet_eval(9, f, 0) == doctest::Approx(oracle::dirichlet(9, f)).epsilon(1e-12));
    }
}

TEST_CASE("dirichlet_eval: derivatives agree with finite differences") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int mt = 6;
    const double h = 1e-6;
    for (int i = 0; i < 30; ++i) {
        const double f = U(rng);
        for (int r = 1; r <= 3; ++r) {
            const double fd = (dirichlet_eval(mt, f + h, r - 1) - dirichlet_eval(mt, f - h, r - 1)) / (2 * h);
            const double scale = std::pow(kTwoPi * mt, r);
            CHECK(std::abs(dirichlet_eval(mt, f, r) - fd) < 1e-6 * scale);
        }
    }
}

TEST_CASE("build_kernel: widths, symmetry, normalization") {
    for (int m : {4, 10, 30, 100, 257}) {
        const KernelSpec k = build_kernel(m);
        CHECK(k.widths[0] == std::lround(0.247 * m));
        CHECK(k.widths[1] == std::lround(0.339 * m));
        CHECK(k.widths[0] + k.widths[1] + k.widths[2] == m);
        CHECK(k.c.size() == static_cast<std::size_t>(2 * m + 1));
        double sum = 0.0;
        for (int l = -m; l <= m; ++l) {
            CHECK(k.coeff(l) >= 0.0);
            CHECK(k.coeff(l) == doctest::Approx(k.coeff(-l)).epsilon(1e-14));
            sum += k.coeff(l);
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
        const auto ref = oracle::kernel_coefficients(m);
        double diff = 0.0;
        for (int l = -m; l <= m; ++l) diff = std::max(diff, std::abs(ref[l + m] - k.coeff(l)));
        CHECK(diff < 1e-14);
    }
    CHECK_THROWS_AS(build_kernel(3), Error);
}

TEST_CASE("build_kernel: kappa definition") {
    for (int m : {10, 50, 300}) {
        const KernelSpec k = build_kernel(m);
        const cplx d2 = kernel_eval(k, 0.0, 2);
        CHECK(std::abs(k.kappa * k.kappa * std::abs(d2) - 1.0) < 1e-12);
    }
}

TEST_CASE("build_kernel: constants at m = 1000") {
    const KernelSpec k = build_kernel(1000);
    CHECK(k.kappa >= 0.467 / 1000);
    CHECK(k.kappa <= 0.468 / 1000);
    CHECK(k.max_coeff() <= 1.3 / 1000);
}

TEST_CASE("kernel_eval: origin values and brute-force sums") {
    const KernelSpec k = build_kernel(50);
    CHECK(std::abs(kernel_eval(k, 0.0, 0) - cplx(1, 0)) < 1e-13);
    CHECK(std::abs(kernel_eval(k, 0.0, 1)) < 1e-9);
    for (int order = 0; order <= 3; ++order) {
        const cplx ref = oracle::kernel_sum(k.c, 0.3, order);
        CHECK(std::abs(kernel_eval(k, 0.3, order) - ref) <= 1e-12 * std::pow(kTwoPi * 50, order));
    }
}

TEST_CASE("kernel_eval: unmasked kernel is real, masked with empty set is identical") {
    const KernelSpec k = build_kernel(40);
    const KernelMask empty(40, {});
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double f = U(rng);
        const cplx v = kernel_eval(k, f, 0);
        CHECK(std::abs(v.imag()) < 1e-12);
        for (int order = 0; order <= 3; ++order) CHECK(kernel_eval(k, f, order, &empty) == kernel_eval(k, f, order));
    }
}

TEST_CASE("kernel_eval: masked coefficients are skipped") {
    const int m = 30;
    const KernelSpec k = build_kernel(m);
    const std::vector<int> omega{-7, 0, 3, 12};
    const KernelMask mask(m, omega);
    std::vector<bool> skip(2 * m + 1, false);
    for (int l : omega) skip[l + m] = true;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const double f = U(rng);
        for (int order = 0; order <= 3; ++order) {
            const cplx ref = oracle::kernel_sum(k.c, f, order, &skip);
            CHECK(std::abs(kernel_eval(k, f, order, &mask) - ref) <= 1e-12 * std::pow(kTwoPi * m, order));
        }
    }
}

TEST_CASE("kernel_eval: derivative consistency on 100 random points") {
    const int m = 60;
    const KernelSpec k = build_kernel(m);
    const KernelMask mask(m, std::vector<int>{-20, -3, 5, 44});
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double h = 1e-7 / m;
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
        const double f = U(rng);
        for (int r = 1; r <= 3; ++r) {
            for (const KernelMask* mk : {static_cast<const KernelMask*>(nullptr), &mask}) {
                const cplx fd = (kernel_eval(k, f + h, r - 1, mk) - kernel_eval(k, f - h, r - 1, mk)) / (2 * h);
                const cplx ex = kernel_eval(k, f, r, mk);
                // Relative error, floored by the roundoff a central difference cannot beat:
                // eps times the absolute coefficient sum of order r-1, divided by the step.
                double cond = 0.0;
                for (int l = -m; l <= m; ++l) cond += k.coeff(l) * std::pow(kTwoPi * std::abs(l), r - 1);
                const double floor = 64.0 * 2.2e-16 * cond / h;
                if (std::abs(ex - fd) > 1e-6 * std::abs(ex) + floor) {
                    ++bad;
                    MESSAGE("f=" << f << " r=" << r << " masked=" << (mk != nullptr) << " exact=" << ex << " fd=" << fd);
                }
            }
        }
    }
    CHECK(bad == 0);
}

TEST_CASE("kernel_eval_all matches single evaluations") {
    const KernelSpec k = build_kernel(100);
    const KernelMask mask(100, std::vector<int>{1, 2, 3, -50});
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double f = U(rng);
        const auto all = kernel_eval_all(k, f, &mask);
        for (int order = 0; order <= 3; ++order)
            CHECK(std::abs(all[order] - kernel_eval(k, f, order, &mask)) <= 1e-10 * std::pow(kTwoPi * 100, order));
    }
}

TEST_CASE("kernel_grid matches pointwise evaluation") {
    const KernelSpec k = build_kernel(20);
    const KernelMask mask(20, std::vector<int>{4, -9});
    const int G = 256;
    for (int order = 0; order <= 2; ++order) {
        const auto grid = kernel_grid(k, G, order, &mask);
        for (int j = 0; j < G; j += 7)
            CHECK(std::abs(grid[j] - kernel_eval(k, static_cast<double>(j) / G, order, &mask)) <=
                  1e-12 * std::pow(kTwoPi * 20, order));
    }
}

TEST_CASE("half_length_for: odd and even n") {
    CHECK(half_length_for(61) == 30);
    CHECK(half_length_for(201) == 100);
    CHECK(half_length_for(16) == 7);
}
