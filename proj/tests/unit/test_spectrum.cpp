#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "shnol/spectrum.hpp"

using namespace shnol;

TEST(Spectrum, CountBelowFreeThree) {
    const auto sec = finite_section(CoefficientModel::constant(), 3, Form::eq1);
    EXPECT_EQ(count_below(sec, 2.0 - 1e-12), 1);
    EXPECT_EQ(count_below(sec, 2.0 + 1e-12), 2);
    EXPECT_EQ(count_below(sec, -10.0), 0);
    EXPECT_EQ(count_below(sec, 10.0), 3);
    EXPECT_EQ(count_below(sec, 2.0 - std::sqrt(2.0) + 1e-12), 1);
    EXPECT_EQ(count_below(sec, 2.0 + std::sqrt(2.0) + 1e-12), 3);
}

TEST(Spectrum, CountBelowMatchesDenseOracle) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = oracle::random_model(rng, 12);
        const auto sec = finite_section(m, 8, trial % 2 ? Form::eq1 : Form::eq2);
        const auto ev = oracle::dense_eigenvalues(oracle::dense_section(sec));
        std::uniform_real_distribution<double> u(ev.front() - 1.0, ev.back() + 1.0);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng);
            const auto expect = std::count_if(ev.begin(), ev.end(), [&](double e) { return e < x; });
            bool near = false;
            for (double e : ev) near = near || std::abs(e - x) < 1e-9;
            if (!near) { EXPECT_EQ(count_below(sec, x), expect); }
        }
    }
}

TEST(Spectrum, CountBelowMonotone) {
    std::mt19937_64 rng(19);
    const auto sec = finite_section(oracle::random_model(rng, 120), 100);
    const auto [lo, hi] = gershgorin(sec);
    std::int64_t prev = 0;
    for (double x = lo - 1.0; x <= hi + 1.0; x += 0.01) {
        const auto c = count_below(sec, x);
        EXPECT_GE(c, prev);
        prev = c;
    }
    EXPECT_EQ(count_below(sec, -1e300), 0);
    EXPECT_EQ(count_below(sec, 1e300), 100);
}

TEST(Spectrum, LaneBisectionMatchesScalarCount) {
    std::mt19937_64 rng(23);
    const auto sec = finite_section(oracle::random_model(rng, 40), 37);
    const auto spec = eigenvalues(sec, 1e-12);
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
        EXPECT_LE(count_below(sec, spec.eigenvalues[k] - 1e-12), static_cast<std::int64_t>(k));
        EXPECT_GE(count_below(sec, spec.eigenvalues[k] + 1e-12), static_cast<std::int64_t>(k) + 1);
    }
}

TEST(Spectrum, FreeClosedForm) {
    const std::int64_t N = 1000;
    const auto spec = eigenvalues(finite_section(CoefficientModel::constant(), N), 1e-11);
    ASSERT_EQ(spec.eigenvalues.size(), 1000u);
    double err = 0.0;
    for (std::int64_t k = 1; k <= N; ++k)
        err = std::max(err, std::abs(spec.eigenvalues[static_cast<std::size_t>(k - 1)] -
                                     (2.0 - 2.0 * std::cos(k * std::numbers::pi / (N + 1)))));
    EXPECT_LE(err, 1e-10);
    EXPECT_TRUE(std::is_sorted(spec.eigenvalues.begin(), spec.eigenvalues.end()));
}

TEST(Spectrum, DefaultToleranceAndTiny) {
    FiniteSection one{0, Form::eq2, {3.25}, {}};
    const auto s = eigenvalues(one);
    ASSERT_EQ(s.eigenvalues.size(), 1u);
    EXPECT_NEAR(s.eigenvalues[0], 3.25, 1e-9);
    EXPECT_NEAR(s.tol, 1e-10 * 3.25, 1e-20);
    const auto empty = eigenvalues(FiniteSection{});
    EXPECT_TRUE(empty.eigenvalues.empty());
    EXPECT_THROW(spectral_distance(empty, 0.0), EmptySpectrum);
}

TEST(Spectrum, MatchesDenseOracleOnRandomModels) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sec = finite_section(oracle::random_model(rng, 90), 80);
        const auto ref = oracle::dense_eigenvalues(oracle::dense_section(sec));
        const auto got = eigenvalues(sec, 1e-12);
        for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(got.eigenvalues[k], ref[k], 1e-10);
    }
}

TEST(Spectrum, WorkerCountDoesNotChangeBits) {
    std::mt19937_64 rng(31);
    const auto sec = finite_section(oracle::random_model(rng, 300), 257);
    const auto a = eigenvalues(sec, 0.0, 1);
    const auto b = eigenvalues(sec, 0.0, 8);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
}

TEST(Spectrum, Interlacing) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = oracle::random_model(rng, 210);
        const std::int64_t N = 20 + 18 * trial;
        const auto a = eigenvalues(finite_section(m, N), 1e-13);
        const auto b = eigenvalues(finite_section(m, N + 1), 1e-13);
        for (std::size_t k = 0; k < a.eigenvalues.size(); ++k) {
            EXPECT_LT(b.eigenvalues[k], a.eigenvalues[k] + 1e-12);
            EXPECT_LT(a.eigenvalues[k], b.eigenvalues[k + 1] + 1e-12);
        }
    }
}

TEST(Spectrum, SpectralDistance) {
    const auto spec = eigenvalues(finite_section(CoefficientModel::constant(), 1000));
    EXPECT_NEAR(spectral_distance(spec, -0.5), 0.5, 1e-4);
    EXPECT_NEAR(spectral_distance(spec, 10.0), 6.0, 1e-4);
    EXPECT_LE(spectral_distance(spec, spec.eigenvalues[417]), 0.0);
}

TEST(Spectrum, Gaps) {
    SpectrumApproximation s{4, {0, 1, 2, 3}, 1e-12};
    EXPECT_EQ(spectrum_gaps(s, 0.0, 3.0), 1.0);
    EXPECT_EQ(spectrum_gaps(s, 10.0, 12.0), 2.0);
    EXPECT_EQ(spectrum_gaps(s, -0.5, 3.0), 1.0);
    EXPECT_THROW(spectrum_gaps(s, 1.0, 1.0), std::invalid_argument);
    const auto free = eigenvalues(finite_section(CoefficientModel::constant(), 1000));
    EXPECT_LE(spectrum_gaps(free, 1.0, 3.0), 0.01);
}

TEST(Spectrum, ResidualSoundnessRandomVectors) {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 100; ++trial) {
        const std::int64_t N = 60;
        const auto m = oracle::random_model(rng, N + 4);
        const auto spec = eigenvalues(finite_section(m, N, Form::eq1), 1e-13);
        const std::int64_t first = static_cast<std::int64_t>(rng() % 20);
        SparseVector w{first, {}};
        const std::int64_t len = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(N - 2 - first));
        for (std::int64_t i = 0; i < len; ++i) w.values.push_back(g(rng));
        const double nw = norm(w);
        const double lam = std::uniform_real_distribution<double>(-5.0, 15.0)(rng);
        const double res = norm(apply(m, w, lam, Form::eq1)) / nw;
        EXPECT_LE(spectral_distance(spec, lam), res + 1e-10);
    }
}

TEST(Spectrum, Csv) {
    std::ostringstream os;
    write_csv(os, SpectrumApproximation{2, {0.5, 1.25}, 1e-10});
    EXPECT_EQ(os.str(), "k,lambda_k\n1,0.5\n2,1.25\n");
}
