#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>

#include "gqpred/gauss_hermite.hpp"
#include "gqpred/rng.hpp"

using namespace gqpred;

TEST_CASE("gauss_hermite order 5 matches the reference rule") {
    const auto rule = linalg::gauss_hermite(5);
    REQUIRE(rule.nodes.size() == 5);
    const double nodes[5] = {-2.0201828704560856, -0.9585724646138185, 0.0, 0.9585724646138185,
                             2.0201828704560856};
    const double weights[5] = {0.019953242059045917, 0.3936193231522411, 0.9453087204829418,
                               0.3936193231522411, 0.019953242059045917};
    for (int i = 0; i < 5; ++i) {
        CHECK(rule.nodes[i] == Catch::Approx(nodes[i]).margin(1e-13));
        CHECK(rule.weights[i] == Catch::Approx(weights[i]).margin(1e-13));
    }
}

TEST_CASE("gauss_hermite trivial and boundary orders") {
    const auto one = linalg::gauss_hermite(1);
    CHECK(one.nodes[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(one.weights[0] == Catch::Approx(std::sqrt(M_PI)).margin(1e-14));
    CHECK_THROWS_AS(linalg::gauss_hermite(0), std::invalid_argument);
    CHECK_THROWS_AS(linalg::gauss_hermite(129), std::invalid_argument);
}

TEST_CASE("gauss_hermite integrates polynomial moments exactly") {
    // Order k integrates monomials up to degree 2k-1 exactly against e^{-x^2}:
    // moments are Gamma((p+1)/2) for even p.
    const auto rule = linalg::gauss_hermite(8);
    const double sqrt_pi = std::sqrt(M_PI);
    double m0 = 0.0, m2 = 0.0, m4 = 0.0, m6 = 0.0, odd = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i], w = rule.weights[i];
        m0 += w;
        m2 += w * x * x;
        m4 += w * x * x * x * x;
        m6 += w * std::pow(x, 6);
        odd += w * std::pow(x, 5);
    }
    CHECK(m0 == Catch::Approx(sqrt_pi).margin(1e-13));
    CHECK(m2 == Catch::Approx(0.5 * sqrt_pi).margin(1e-13));
    CHECK(m4 == Catch::Approx(0.75 * sqrt_pi).margin(1e-13));
    CHECK(m6 == Catch::Approx(1.875 * sqrt_pi).margin(1e-12));
    // Odd moments cancel pairwise across +-x; the fifth power leaves summed
    // terms of magnitude ~1e2, so the cancellation residue sits near 1e-13.
    CHECK(std::abs(odd) < 1e-11);
}

TEST_CASE("normal_quadrature computes Gaussian expectations") {
    const auto rule = linalg::gauss_hermite(16);
    const double mu = 1.7, var = 0.35;
    const auto q = linalg::normal_quadrature(rule, mu, var);
    double mass = 0.0, mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) {
        mass += q.weights[i];
        mean += q.weights[i] * q.points[i];
        second += q.weights[i] * q.points[i] * q.points[i];
    }
    CHECK(mass == Catch::Approx(1.0).margin(1e-13));
    CHECK(mean == Catch::Approx(mu).margin(1e-13));
    CHECK(second == Catch::Approx(mu * mu + var).margin(1e-12));
    CHECK_THROWS_AS(linalg::normal_quadrature(rule, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("stream rng reference sequence is frozen") {
    // First outputs of stream (seed 5, stream 7); any change to the seeding
    // or the generator breaks every recorded result, so this is pinned.
    sim::StreamRng rng(5, 7);
    CHECK(rng.next_u64() == 3417198244727130079ULL);
    CHECK(rng.next_u64() == 5089702558653469003ULL);
    CHECK(rng.next_u64() == 17392460992796375623ULL);
    CHECK(rng.next_u64() == 14476526402780022982ULL);
}

TEST_CASE("stream rng determinism and stream separation") {
    sim::StreamRng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    bool same = true, differs_stream = false, differs_seed = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        if (va != b.next_u64()) same = false;
        if (va != c.next_u64()) differs_stream = true;
        if (va != d.next_u64()) differs_seed = true;
    }
    CHECK(same);
    CHECK(differs_stream);
    CHECK(differs_seed);
}

TEST_CASE("uniform and normal draws have the expected first moments") {
    sim::StreamRng rng(2024, 0);
    const int n = 200000;
    double su = 0.0, su2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        su += u;
        su2 += u * u;
    }
    // mean 1/2 (sd ~ 0.000645), second moment 1/3.
    CHECK(su / n == Catch::Approx(0.5).margin(0.004));
    CHECK(su2 / n == Catch::Approx(1.0 / 3.0).margin(0.004));

    double sn = 0.0, sn2 = 0.0, sn3 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.next_normal();
        sn += g;
        sn2 += g * g;
        sn3 += g * g * g;
    }
    CHECK(sn / n == Catch::Approx(0.0).margin(0.01));
    CHECK(sn2 / n == Catch::Approx(1.0).margin(0.02));
    CHECK(sn3 / n == Catch::Approx(0.0).margin(0.05));
}

TEST_CASE("complex normal draws respect mean and per-component variance") {
    sim::StreamRng rng(99, 1);
    const cplx mean(0.7, -1.2);
    const double cvar = 0.8;
    const int n = 100000;
    cplx sum(0.0, 0.0);
    double sre = 0.0, sim_ = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx z = rng.next_complex_normal(mean, cvar);
        sum += z;
        const double re = z.real() - mean.real();
        const double im = z.imag() - mean.imag();
        sre += re * re;
        sim_ += im * im;
        cross += re * im;
    }
    CHECK(std::abs(sum / static_cast<double>(n) - mean) < 0.02);
    CHECK(sre / n == Catch::Approx(cvar).epsilon(0.03));
    CHECK(sim_ / n == Catch::Approx(cvar).epsilon(0.03));
    CHECK(std::abs(cross / n) < 0.02);
    CHECK_THROWS_AS(rng.next_complex_normal(mean, -1.0), std::invalid_argument);
}
