#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "shnol/jacobi_operator.hpp"
#include "shnol/spectrum.hpp"

using namespace shnol;

TEST(Operator, LaplacianStencil) {
    const auto r = apply(CoefficientModel::constant(), SparseVector{5, {1.0}}, 0.0);
    EXPECT_EQ(r.first, 4);
    ASSERT_EQ(r.values.size(), 3u);
    EXPECT_EQ(r.values[0], -1.0);
    EXPECT_EQ(r.values[1], 2.0);
    EXPECT_EQ(r.values[2], -1.0);
    const auto r2 = apply(CoefficientModel::constant(), SparseVector{5, {1.0}}, 0.0, Form::eq2);
    EXPECT_EQ(r2.values[0], 1.0);
}

TEST(Operator, ApplyAtLeftEdgeEmitsNothingOffLattice) {
    const auto r = apply(CoefficientModel::constant(), SparseVector{0, {1.0}}, 0.0);
    EXPECT_EQ(r.first, 0);
    EXPECT_EQ(r.values.size(), 2u);
}

TEST(Operator, ApplyMatchesDenseProduct) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    // a = b = 1, lambda = 1.5, support {0..9}
    {
        const auto m = CoefficientModel::constant(1.0, 1.0);
        SparseVector w{0, {}};
        for (int i = 0; i < 10; ++i) w.values.push_back(u(rng));
        const auto r = apply(m, w, 1.5);
        const Eigen::MatrixXd A = oracle::dense_operator(m, 12, -1.0) - 1.5 * Eigen::MatrixXd::Identity(12, 12);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(12);
        for (int i = 0; i < 10; ++i) x(i) = w.values[static_cast<std::size_t>(i)];
        const Eigen::VectorXd ref = A * x;
        for (int i = 0; i < 11; ++i) EXPECT_NEAR(r.at(i), ref(i), 1e-14);
    }
    // random models and supports up to 32 sites
    for (int trial = 0; trial < 200; ++trial) {
        const std::int64_t start = trial % 4;
        const auto m = oracle::random_model(rng, 48, start);
        const std::int64_t len = 1 + trial % 32;
        const std::int64_t first = start + static_cast<std::int64_t>(rng() % 10);
        SparseVector w{first, {}};
        for (std::int64_t i = 0; i < len; ++i) w.values.push_back(u(rng));
        const double lam = 3.0 * u(rng);
        const Form form = trial % 2 ? Form::eq1 : Form::eq2;
        const auto r = apply(m, w, lam, form);
        const std::int64_t N = 46;
        const Eigen::MatrixXd A =
            oracle::dense_operator(m, N, off_diagonal_sign(form)) - lam * Eigen::MatrixXd::Identity(N, N);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
        for (std::int64_t n = w.first; n <= w.last(); ++n) x(n - start) = w.at(n);
        const Eigen::VectorXd ref = A * x;
        const double scale = ref.cwiseAbs().maxCoeff() + 1.0;
        for (std::int64_t n = start; n < start + N; ++n) EXPECT_NEAR(r.at(n), ref(n - start), 1e-13 * scale);
    }
}

TEST(Operator, ApplySupportChecks) {
    const auto t = CoefficientModel::tabulated({0.0, 1.0, 1.0, 1.0, 1.0}, {0.0, 0.0, 0.0, 0.0}, 2);
    EXPECT_THROW(apply(t, SparseVector{1, {1.0}}, 0.0), SupportOutOfRange);
    EXPECT_THROW(apply(t, SparseVector{5, {1.0}}, 0.0), SupportOutOfRange);
    EXPECT_NO_THROW(apply(t, SparseVector{4, {1.0}}, 0.0));
    EXPECT_TRUE(apply(t, SparseVector{3, {}}, 0.0).empty());
}

TEST(Operator, FiniteSections) {
    const auto s = finite_section(CoefficientModel::constant(), 3, Form::eq1);
    EXPECT_EQ(s.diag, (std::vector<double>{2, 2, 2}));
    EXPECT_EQ(s.offdiag, (std::vector<double>{-1, -1}));

    const auto w = finite_section(CoefficientModel::wimp(), 4, Form::eq1);
    EXPECT_EQ(w.start, 1);
    EXPECT_EQ(w.diag, (std::vector<double>{2, 4, 6, 8}));
    ASSERT_EQ(w.offdiag.size(), 3u);
    EXPECT_NEAR(w.offdiag[0], -std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(w.offdiag[1], -std::sqrt(6.0), 1e-15);
    EXPECT_NEAR(w.offdiag[2], -std::sqrt(12.0), 1e-15);
    EXPECT_GT(finite_section(CoefficientModel::wimp(), 4).offdiag[0], 0.0);

    const auto one = finite_section(CoefficientModel::power(1.0, 0.25), 1);
    ASSERT_EQ(one.diag.size(), 1u);
    EXPECT_EQ(one.diag[0], 0.25 + 1.0 + 0.0);
    EXPECT_TRUE(one.offdiag.empty());
    EXPECT_THROW(finite_section(CoefficientModel::constant(), 0), std::invalid_argument);
}

TEST(Operator, SectionIsPrincipalSubmatrix) {
    std::mt19937_64 rng(5);
    const auto m = oracle::random_model(rng, 60);
    const auto small = finite_section(m, 30);
    const auto big = finite_section(m, 31);
    for (std::size_t k = 0; k < 30; ++k) EXPECT_EQ(small.diag[k], big.diag[k]);
    for (std::size_t k = 0; k < 29; ++k) EXPECT_EQ(small.offdiag[k], big.offdiag[k]);
}

TEST(Operator, GaugeConjugate) {
    FiniteSection s{0, Form::eq1, {2, 2}, {-1}};
    const auto g = gauge_conjugate(s);
    EXPECT_EQ(g.diag, s.diag);
    EXPECT_EQ(g.offdiag, (std::vector<double>{1}));
    EXPECT_EQ(g.form, Form::eq2);
    const auto gg = gauge_conjugate(g);
    EXPECT_EQ(gg.offdiag, s.offdiag);
    EXPECT_EQ(gg.form, s.form);

    std::mt19937_64 rng(9);
    const auto sec = finite_section(oracle::random_model(rng, 60), 50);
    const auto e1 = eigenvalues(sec, 1e-13);
    const auto e2 = eigenvalues(gauge_conjugate(sec), 1e-13);
    for (std::size_t k = 0; k < 50; ++k) EXPECT_NEAR(e1.eigenvalues[k], e2.eigenvalues[k], 1e-12);
}

TEST(Operator, SectionCsv) {
    std::ostringstream os;
    write_csv(os, finite_section(CoefficientModel::constant(), 2));
    EXPECT_EQ(os.str(), "n,diag,offdiag\n0,2,1\n1,2,\n");
}

TEST(Operator, HintonLewisReproducesWimp) {
    const std::int64_t N = 200;
    IndexedSequence p{1, {}}, q{1, {}}, c{1, {}};
    for (std::int64_t n = 1; n <= N + 1; ++n) {
        p.values.push_back(double(n) * double(n + 1));
        q.values.push_back(2.0 * double(n) * double(n));
        c.values.push_back(double(n));
    }
    const auto hl = hinton_lewis(p, q, c, N);
    const auto wimp = CoefficientModel::wimp();
    for (std::int64_t n = 1; n <= N; ++n) {
        EXPECT_NEAR(hl.a_tilde[n], wimp.a(n), 1e-12 * n);
        EXPECT_NEAR(hl.b_tilde[n], 2.0 * n, 1e-12 * n);
        EXPECT_NEAR(hl.model.diagonal(n), 2.0 * n, 1e-12 * n);
    }
    EXPECT_EQ(hl.model.start_index(), 1);
    EXPECT_EQ(hl.model.last_site(), N);
}

TEST(Operator, HintonLewisIdentityWeight) {
    IndexedSequence p{0, {1.5, 2.0, 0.5, 3.0}}, q{0, {0.1, -0.2, 0.3, 0.0}}, c{0, {1, 1, 1, 1}};
    const auto hl = hinton_lewis(p, q, c, 3);
    for (std::int64_t n = 0; n < 3; ++n) {
        EXPECT_EQ(hl.a_tilde[n], p[n]);
        EXPECT_EQ(hl.b_tilde[n], q[n]);
    }
}

TEST(Operator, HintonLewisMatchesGeneralizedPencil) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.5, 2.0), v(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::int64_t N = 6;
        IndexedSequence p{0, {}}, q{0, {}}, c{0, {}};
        for (std::int64_t n = 0; n <= N; ++n) {
            p.values.push_back(u(rng));
            q.values.push_back(3.0 * v(rng));
            c.values.push_back(u(rng));
        }
        const auto hl = hinton_lewis(p, q, c, N);
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N, N);
        for (std::int64_t k = 0; k < N; ++k) {
            T(k, k) = q[k];
            if (k + 1 < N) T(k, k + 1) = T(k + 1, k) = -p[k];
        }
        const auto ref = oracle::generalized_eigenvalues(T, c.values);
        const auto got = eigenvalues(finite_section(hl.model, N, Form::eq1), 1e-13);
        for (std::size_t k = 0; k < static_cast<std::size_t>(N); ++k)
            EXPECT_NEAR(got.eigenvalues[k], ref[k], 1e-10);
    }
}

TEST(Operator, HintonLewisErrors) {
    IndexedSequence p{0, {1, 1, 1}}, q{0, {0, 0, 0}}, c{0, {1, 0, 1}};
    EXPECT_THROW(hinton_lewis(p, q, c, 2), NonPositiveWeight);
    IndexedSequence c2{0, {1, 1}};
    EXPECT_THROW(hinton_lewis(p, q, c2, 2), IndexOutOfRange);
}
