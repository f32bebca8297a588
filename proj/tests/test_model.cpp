#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "sinespike/model.hpp"

using namespace sinespike;

namespace {

std::vector<cplx> amps_of(const LineSpectrum& s) {
    std::vector<cplx> a;
    for (const auto& l : s.lines()) a.push_back(l.amp);
    return a;
}

GenerationParams params(int n, int k, int s, double delta_units, std::uint64_t seed) {
    GenerationParams p;
    p.n = n;
    p.k = k;
    p.s = s;
    p.delta_min = delta_units / (n - 1);
    p.seed = seed;
    return p;
}

} // namespace

TEST_CASE("forward: constant and alternating sequences") {
    const CVector a = forward(LineSpectrum({{0.0, cplx(1, 0)}}), 4);
    for (int l = 0; l < 4; ++l) CHECK(std::abs(a[l] - cplx(1, 0)) < 1e-15);
    const CVector b = forward(LineSpectrum({{0.5, cplx(1, 0)}}), 4);
    const double expect[] = {-1, 1, -1, 1};
    for (int l = 0; l < 4; ++l) CHECK(std::abs(b[l] - cplx(expect[l], 0)) < 1e-14);
}

TEST_CASE("forward: picket fence spectrum samples") {
    std::vector<SpectralLine> lines;
    for (int j = 0; j < 4; ++j) lines.push_back({j / 4.0, cplx(0.25, 0)});
    const CVector y = forward(LineSpectrum(lines), 16);
    for (int l = 1; l <= 16; ++l) CHECK(std::abs(y[l - 1] - cplx(l % 4 == 0 ? 1.0 : 0.0, 0)) < 1e-14);
}

TEST_CASE("forward: matches direct summation and is linear") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 5 + rep;
        std::vector<SpectralLine> l1, l2, sum;
        const cplx a(0.7, -1.3), b(-2.1, 0.4);
        for (int j = 0; j < 3; ++j) {
            const double f = (j + U(rng) * 0.9) / 3.0;
            const cplx x1(U(rng) - 0.5, U(rng) - 0.5), x2(U(rng) - 0.5, U(rng) - 0.5);
            l1.push_back({f, x1});
            l2.push_back({f, x2});
            sum.push_back({f, a * x1 + b * x2});
        }
        const LineSpectrum s1(l1), s2(l2), ss(sum);
        const CVector y1 = forward(s1, n);
        CHECK(oracle::rel_err(y1, oracle::forward(s1.frequencies(), amps_of(s1), n)) < 1e-13);
        const CVector lhs = forward(ss, n);
        const CVector rhs = a * y1 + b * forward(s2, n);
        CHECK(oracle::rel_err(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("min_separation: wrap-around distances") {
    const std::vector<double> a{0.0, 0.75};
    CHECK(min_separation(a) == doctest::Approx(0.25).epsilon(1e-15));
    const std::vector<double> b{0.3};
    CHECK(min_separation(b) == std::numeric_limits<double>::infinity());
    CHECK(min_separation(std::vector<double>{}) == std::numeric_limits<double>::infinity());
    const std::vector<double> c{0.1, 0.5, 0.9};
    CHECK(min_separation(c) == doctest::Approx(oracle::min_separation(c)).epsilon(1e-14));
    CHECK(min_separation(c) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("LineSpectrum: canonical order and validation") {
    const LineSpectrum s({{0.7, cplx(1, 0)}, {0.2, cplx(2, 0)}});
    CHECK(s.lines()[0].freq == 0.2);
    CHECK(s.lines()[1].freq == 0.7);
    CHECK_THROWS_AS(LineSpectrum({{1.0, cplx(1, 0)}}), Error);
    CHECK_THROWS_AS(LineSpectrum({{-0.1, cplx(1, 0)}}), Error);
    CHECK_THROWS_AS(LineSpectrum({{0.3, cplx(1, 0)}, {0.3, cplx(2, 0)}}), Error);
}

TEST_CASE("SpikeVector: zeros are not stored and dense round trip") {
    const SpikeVector z(8, {{2, cplx(1, 1)}, {5, cplx(0, 0)}, {8, cplx(-3, 0)}});
    CHECK(z.size() == 2);
    CHECK(z.support() == std::vector<int>{2, 8});
    const CVector d = z.dense();
    CHECK(d[1] == cplx(1, 1));
    CHECK(d[7] == cplx(-3, 0));
    CHECK(SpikeVector::from_dense(d).values() == z.values());
    CHECK(z.l1_norm() == doctest::Approx(std::sqrt(2.0) + 3.0));
    CHECK_THROWS_AS(SpikeVector(8, {{0, cplx(1, 0)}}), Error);
    CHECK_THROWS_AS(SpikeVector(8, {{9, cplx(1, 0)}}), Error);
}

TEST_CASE("generate_instance: empty model gives zero data") {
    const Instance inst = generate_instance(params(61, 0, 0, 0.0, 3));
    CHECK(inst.y.norm() == 0.0);
    CHECK(inst.spectrum.empty());
    CHECK(inst.spikes.size() == 0);
}

TEST_CASE("generate_instance: deterministic per seed") {
    GenerationParams p = params(101, 6, 10, 2.8, 1234);
    p.noise_level = 0.1;
    const Instance a = generate_instance(p);
    const Instance b = generate_instance(p);
    CHECK(a.y == b.y);
    CHECK(a.spectrum.frequencies() == b.spectrum.frequencies());
    CHECK(a.spikes.values() == b.spikes.values());
    p.seed = 1235;
    CHECK(generate_instance(p).y != a.y);
}

TEST_CASE("generate_instance: data equal the sum of the parts") {
    GenerationParams p = params(101, 6, 10, 2.8, 9);
    p.noise_level = 0.5;
    const Instance inst = generate_instance(p);
    const CVector y = oracle::forward(inst.spectrum.frequencies(), amps_of(inst.spectrum), 101) +
                      inst.spikes.dense() + inst.dense_noise;
    CHECK((inst.y - y).norm() < 1e-12 * y.norm());
    CHECK(inst.dense_noise.norm() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(inst.spectrum.size() == 6);
    CHECK(inst.spikes.size() == 10);
    for (const auto& l : inst.spectrum.lines()) CHECK(std::abs(std::abs(l.amp) - 1.0) < 1e-14);
}

TEST_CASE("generate_instance: separation holds for 1000 seeded draws") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        GenerationParams p = params(61, 8, 5, 2.52, seed);
        const Instance inst = generate_instance(p);
        if (oracle::min_separation(inst.spectrum.frequencies()) >= p.delta_min) ++ok;
    }
    CHECK(ok == 1000);
}

TEST_CASE("generate_instance: Bernoulli support and Gaussian amplitudes") {
    GenerationParams p = params(200, 3, 20, 3.0, 5);
    p.support_mode = OutlierSupport::Bernoulli;
    p.amp_law = AmplitudeLaw::ComplexGaussian;
    double total = 0.0;
    bool non_unit = false;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        p.seed = seed;
        const Instance inst = generate_instance(p);
        total += static_cast<double>(inst.spikes.size());
        for (const auto& l : inst.spectrum.lines())
            if (std::abs(std::abs(l.amp) - 1.0) > 1e-3) non_unit = true;
    }
    // Mean support size s, standard error about 0.3 over 200 draws.
    CHECK(std::abs(total / 200.0 - 20.0) < 1.5);
    CHECK(non_unit);
}

TEST_CASE("generate_instance: preconditions") {
    CHECK_THROWS_AS(generate_instance(params(61, 30, 0, 2.1, 1)), Error);
    try {
        generate_instance(params(61, 30, 0, 2.1, 1));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Infeasible);
    }
    CHECK_THROWS_AS(generate_instance(params(61, 1, 62, 1.0, 1)), Error);
}

TEST_CASE("picket_fence: zero data from nonzero parts") {
    const Instance inst = picket_fence(16);
    CHECK(inst.y.size() == 16);
    CHECK(inst.y.cwiseAbs().maxCoeff() == 0.0);
    CHECK(inst.spikes.size() == 4);
    CHECK(inst.spectrum.size() == 4);
    for (int kp = 2; kp * kp <= 400; ++kp) {
        const Instance p = picket_fence(kp * kp);
        const CVector y = forward(p.spectrum, kp * kp) + p.spikes.dense();
        CHECK(y.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(p.y.cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(picket_fence(15), Error);
    CHECK_THROWS_AS(picket_fence(1), Error);
}

TEST_CASE("recovery_score: truth against itself and degraded estimates") {
    const Instance inst = generate_instance(params(61, 5, 10, 2.52, 4));
    const RecoveryScore same = recovery_score(inst, inst.spectrum, inst.spikes);
    CHECK(same.relative_mse == 0.0);
    CHECK(same.hausdorff == 0.0);
    CHECK(same.exact_demix);

    const RecoveryScore empty = recovery_score(inst, LineSpectrum(), inst.spikes);
    CHECK_FALSE(empty.exact_demix);
    CHECK(empty.hausdorff == 0.5);

    std::vector<SpectralLine> moved = inst.spectrum.lines();
    moved[2].freq += 1e-3;
    const RecoveryScore shifted = recovery_score(inst, LineSpectrum(moved), inst.spikes);
    CHECK_FALSE(shifted.exact_demix);
    // The data misfit of a 1e-3 shift is far above 1e-8.
    const auto amps = amps_of(LineSpectrum(moved));
    const CVector g = oracle::forward(inst.spectrum.frequencies(), amps_of(inst.spectrum), 61);
    const CVector gh = oracle::forward(LineSpectrum(moved).frequencies(), amps, 61);
    CHECK(shifted.relative_mse == doctest::Approx((g - gh).norm() / g.norm()).epsilon(1e-9));

    auto spikes = inst.spikes.values();
    spikes.erase(spikes.begin());
    CHECK_FALSE(recovery_score(inst, inst.spectrum, SpikeVector(61, spikes)).exact_demix);
    CHECK_THROWS_AS(recovery_score(inst, inst.spectrum, SpikeVector(60)), Error);
}

TEST_CASE("recovery_score: exact on every noiseless instance") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Instance inst = generate_instance(params(41, 3, 4, 2.6, seed));
        CHECK(recovery_score(inst, inst.spectrum, inst.spikes).exact_demix);
    }
}

TEST_CASE("hausdorff_distance: wraps around") {
    const std::vector<double> a{0.01}, b{0.99};
    CHECK(hausdorff_distance(a, b) == doctest::Approx(0.02).epsilon(1e-12));
    const std::vector<double> c{0.1, 0.5}, d{0.1};
    CHECK(hausdorff_distance(c, d) == doctest::Approx(0.4).epsilon(1e-12));
}
