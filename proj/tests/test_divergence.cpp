#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "tweedie/divergence.hpp"
#include "tweedie/errors.hpp"
#include "test_support.hpp"

using namespace tweedie;
using tweedie::testing::Draw;
using tweedie::testing::random_draws;
using tweedie::testing::mixed_err;
using tweedie::testing::rel_err;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);

// Raw beta divergence formula, evaluated in long double. Test-side oracle for
// p outside {1, 2}.
double beta_raw(double p, double x, double mu) {
    const long double a = 1.0L - p, b = 2.0L - p;
    const long double X = x, M = mu;
    return static_cast<double>(std::pow(X, b) / (a * b) - X * std::pow(M, a) / a +
                               std::pow(M, b) / b);
}

double alpha_raw(double p, double x, double mu) {
    const long double a = 1.0L - p, b = 2.0L - p;
    const long double X = x, M = mu;
    return static_cast<double>(std::pow(X, b) * std::pow(M, -a) / (a * b) - X / a + M / b);
}

}  // namespace

TEST(PowerIndex, ClassifiesEveryRegion) {
    EXPECT_EQ(PowerIndex(0.0).model_class(), ModelClass::Gaussian);
    EXPECT_EQ(PowerIndex(1.0).model_class(), ModelClass::Poisson);
    EXPECT_EQ(PowerIndex(1.5).model_class(), ModelClass::CompoundPoisson);
    EXPECT_EQ(PowerIndex(2.0).model_class(), ModelClass::Gamma);
    EXPECT_EQ(PowerIndex(3.0).model_class(), ModelClass::InverseGaussian);
    EXPECT_EQ(PowerIndex(0.5).model_class(), ModelClass::NoModel);
    EXPECT_EQ(PowerIndex(-1.0).model_class(), ModelClass::OtherValid);
    EXPECT_EQ(PowerIndex(2.5).model_class(), ModelClass::OtherValid);
    EXPECT_EQ(PowerIndex(4.0).model_class(), ModelClass::OtherValid);
    EXPECT_FALSE(PowerIndex(0.999).has_model());
    EXPECT_THROW((void)PowerIndex(std::nan("")), DomainError);
    EXPECT_THROW((void)PowerIndex(kInf), DomainError);
}

TEST(DualCumulant, Examples) {
    EXPECT_EQ(dual_cumulant(PowerIndex(0), 1.0), 0.0);
    EXPECT_DOUBLE_EQ(dual_cumulant(PowerIndex(0), 3.0), 2.0);
    EXPECT_NEAR(dual_cumulant(PowerIndex(1), 2.0), 0.38629436111989062, 1e-15);
    EXPECT_NEAR(dual_cumulant(PowerIndex(1 + 1e-8), 2.0), 2 * kLn2 - 1, 1e-6);
    EXPECT_NEAR(dual_cumulant(PowerIndex(1 - 1e-8), 2.0), 2 * kLn2 - 1, 1e-6);
    EXPECT_NEAR(dual_cumulant(PowerIndex(2), 2.0), 1.0 - kLn2, 1e-15);
    // p = 0 accepts any real argument.
    EXPECT_DOUBLE_EQ(dual_cumulant(PowerIndex(0), -1.0), 2.0);
}

TEST(DualCumulant, NormalisedAtOne) {
    for (double p : {-2.0, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 1.00005, 1.99995}) {
        EXPECT_NEAR(dual_cumulant(PowerIndex(p), 1.0), 0.0, 1e-15) << p;
        EXPECT_NEAR(dual_cumulant_derivative(PowerIndex(p), 1.0), 0.0, 1e-15) << p;
    }
}

TEST(DualCumulant, QuadraticNearOne) {
    // phi_p(e^t) = t^2/2 + (3 - p) t^3 / 6 + O(t^4)
    for (double p : {-1.0, 0.0, 0.7, 1.0, 1.00005, 1.5, 2.0, 2.5, 3.0, 4.5}) {
        for (double t0 : {-1e-5, -3e-7, 2e-7, 1e-5}) {
            const double r = std::exp(t0);
            const double t = std::log1p(r - 1);
            const double want = t * t / 2 + (3 - p) * t * t * t / 6;
            EXPECT_LE(rel_err(dual_cumulant(PowerIndex(p), r), want), 1e-9) << p << " " << t;
            const double mu = 4.0;
            const double x = mu * r;
            EXPECT_LE(rel_err(alpha_divergence(PowerIndex(p), x, mu), mu * want), 1e-9) << p;
            EXPECT_LE(rel_err(beta_divergence(PowerIndex(p), x, mu), std::pow(mu, 2 - p) * want), 1e-9) << p;
        }
    }
}

TEST(DualCumulant, RejectsOutOfDomain) {
    EXPECT_THROW(dual_cumulant(PowerIndex(1.5), 0.0), DomainError);
    EXPECT_THROW(dual_cumulant(PowerIndex(2), -1.0), DomainError);
    EXPECT_THROW(dual_cumulant(PowerIndex(0), std::nan("")), DomainError);
    EXPECT_THROW(dual_cumulant(PowerIndex(1), kInf), DomainError);
}

TEST(DualCumulant, ConvexOnRandomChords) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> up(-2.0, 4.0), ux(0.05, 10.0), ut(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const PowerIndex p(up(rng));
        const double a = ux(rng), b = ux(rng), t = ut(rng);
        const double lhs = dual_cumulant(p, t * a + (1 - t) * b);
        const double rhs = t * dual_cumulant(p, a) + (1 - t) * dual_cumulant(p, b);
        EXPECT_LE(lhs, rhs + 1e-12 * (1 + std::fabs(rhs)));
    }
}

TEST(BetaDivergence, Examples) {
    EXPECT_DOUBLE_EQ(beta_divergence(PowerIndex(0), 3.0, 1.0), 2.0);
    EXPECT_EQ(beta_divergence(PowerIndex(2), 5.0, 5.0), 0.0);
    EXPECT_NEAR(beta_divergence(PowerIndex(1), 2.0, 1.0), 0.38629436111989062, 1e-15);
    // p = 0 admits negative arguments.
    EXPECT_DOUBLE_EQ(beta_divergence(PowerIndex(0), -1.0, 2.0), 4.5);
}

TEST(BetaDivergence, MatchesRawFormulaAwayFromSingularIndices) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> up(-2.0, 4.0), ux(0.1, 10.0);
    for (int i = 0; i < 2000; ++i) {
        const double p = up(rng);
        if (std::fabs(p - 1) < 0.05 || std::fabs(p - 2) < 0.05) continue;
        const double x = ux(rng), mu = ux(rng);
        const double expected = beta_raw(p, x, mu);
        EXPECT_NEAR(beta_divergence(PowerIndex(p), x, mu), expected, 1e-11 * (1 + expected));
        const double expected_alpha = alpha_raw(p, x, mu);
        EXPECT_NEAR(alpha_divergence(PowerIndex(p), x, mu), expected_alpha,
                    1e-11 * (1 + expected_alpha));
    }
}

TEST(BetaDivergence, ZeroObservationConventions) {
    EXPECT_DOUBLE_EQ(beta_divergence(PowerIndex(1), 0.0, 3.0), 3.0);
    EXPECT_NEAR(beta_divergence(PowerIndex(1.5), 0.0, 4.0), std::sqrt(4.0) / 0.5, 1e-14);
    EXPECT_NEAR(beta_divergence(PowerIndex(0.5), 0.0, 4.0), 8.0 / 1.5, 1e-14);
    EXPECT_EQ(beta_divergence(PowerIndex(2), 0.0, 1.0), kInf);
    EXPECT_EQ(beta_divergence(PowerIndex(3), 0.0, 1.0), kInf);
    EXPECT_EQ(beta_divergence(PowerIndex(2.5), 0.0, 1.0), kInf);
    EXPECT_EQ(alpha_divergence(PowerIndex(2), 0.0, 1.0), kInf);
    EXPECT_NEAR(alpha_divergence(PowerIndex(1.5), 0.0, 4.0), 4.0 / 0.5, 1e-14);
}

TEST(BetaDivergence, DomainErrors) {
    EXPECT_THROW(beta_divergence(PowerIndex(1.5), -1.0, 1.0), DomainError);
    EXPECT_THROW(beta_divergence(PowerIndex(1), 1.0, 0.0), DomainError);
    EXPECT_THROW(beta_divergence(PowerIndex(2), 1.0, -2.0), DomainError);
    EXPECT_THROW(beta_divergence(PowerIndex(0), std::nan(""), 1.0), DomainError);
    EXPECT_THROW(alpha_divergence(PowerIndex(0), 1.0, 0.0), DomainError);
    EXPECT_THROW(alpha_divergence(PowerIndex(0), 1.0, -1.0), DomainError);
    EXPECT_THROW(beta_divergence(PowerIndex(0.5), -0.5, 1.0), DomainError);
}

TEST(AlphaDivergence, Examples) {
    EXPECT_DOUBLE_EQ(alpha_divergence(PowerIndex(0), 3.0, 2.0), 0.25);
    EXPECT_NEAR(alpha_divergence(PowerIndex(1.5), 4.0, 1.0), 2.0, 1e-14);
    EXPECT_EQ(alpha_divergence(PowerIndex(1), 2.0, 2.0), 0.0);
}

TEST(AlphaDivergence, HellingerSymmetricAndMetric) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(0.0, 50.0);
    const PowerIndex h(1.5);
    const auto dist = [&](double a, double b) { return std::sqrt(alpha_divergence(h, a, b) / 2); };
    for (int i = 0; i < 1000; ++i) {
        const double a = ux(rng), b = ux(rng) + 1e-3, c = ux(rng) + 1e-3;
        if (a > 0) EXPECT_NEAR(alpha_divergence(h, a, b), alpha_divergence(h, b, a), 1e-12 * (1 + a + b));
        EXPECT_LE(dist(a, c), dist(a, b) + dist(b, c) + 1e-9);
    }
}

TEST(Generators, BregmanExamples) {
    ConvexGenerator half_square{[](double t) { return 0.5 * t * t; }, [](double t) { return t; }, {}};
    EXPECT_DOUBLE_EQ(bregman(half_square, 3.0, 1.0), 2.0);
    EXPECT_EQ(bregman(half_square, 4.0, 4.0), 0.0);
    const auto gen = dual_cumulant_generator(PowerIndex(1.3));
    EXPECT_NEAR(bregman(gen, 2.5, 0.7), beta_divergence(PowerIndex(1.3), 2.5, 0.7), 1e-13);
    EXPECT_THROW(bregman(gen, -1.0, 1.0), DomainError);
    EXPECT_THROW(bregman(dual_cumulant_generator(PowerIndex(2)), 0.0, 1.0), DomainError);
}

TEST(Generators, FDivergenceExamples) {
    const auto kl = dual_cumulant_generator(PowerIndex(1));
    EXPECT_NEAR(f_divergence(kl, 2.0, 1.0), 0.38629436111989062, 1e-15);
    EXPECT_EQ(f_divergence(kl, 3.0, 3.0), 0.0);
    EXPECT_THROW(f_divergence(kl, 1.0, 0.0), DomainError);
    EXPECT_THROW(f_divergence(kl, -1.0, 1.0), DomainError);
}

TEST(Generators, CsiszarDualSwapsArguments) {
    for (const auto& d : random_draws(500, 21)) {
        const auto f = dual_cumulant_generator(d.p);
        const auto dual = csiszar_dual(f);
        const double lhs = f_divergence(f, d.x, d.mu);
        EXPECT_NEAR(f_divergence(dual, d.mu, d.x), lhs, 1e-10 * (1 + lhs));
    }
}

TEST(Generators, DualIndexAndQConvention) {
    EXPECT_EQ(alpha_dual_index(1.0), 2.0);
    EXPECT_EQ(alpha_dual_index(1.5), 1.5);
    EXPECT_EQ(alpha_dual_index(0.0), 3.0);
    EXPECT_EQ(q_convention(0.0), 2.0);
    EXPECT_EQ(q_convention(2.0), 0.0);
    EXPECT_EQ(q_convention(1.0), 1.0);
    for (double p : {-3.25, 0.0, 0.7, 1.5, 2.0, 5.5}) EXPECT_EQ(p_from_q_convention(q_convention(p)), p);
}

TEST(Generators, QConventionFormsMatch) {
    // (q(q-1))^-1 {x^q mu^(1-q) - q x + (q-1) mu} and
    // (q(q-1))^-1 {x^q - (1-q) mu^q - q x mu^(q-1)}.
    for (const auto& d : random_draws(500, 5)) {
        const double q = q_convention(d.p.value());
        if (std::fabs(q) < 1e-3 || std::fabs(q - 1) < 1e-3) continue;
        const double norm = q * (q - 1);
        const double alpha_q = (std::pow(d.x, q) * std::pow(d.mu, 1 - q) - q * d.x + (q - 1) * d.mu) / norm;
        const double beta_q = (std::pow(d.x, q) - (1 - q) * std::pow(d.mu, q) - q * d.x * std::pow(d.mu, q - 1)) / norm;
        const double a = alpha_divergence(d.p, d.x, d.mu);
        const double b = beta_divergence(d.p, d.x, d.mu);
        EXPECT_NEAR(alpha_q, a, 1e-9 * (1 + a));
        EXPECT_NEAR(beta_q, b, 1e-9 * (1 + b));
    }
}

TEST(BetaFromAlpha, Examples) {
    EXPECT_NEAR(beta_from_alpha(PowerIndex(1), 3.0, 0.5), alpha_divergence(PowerIndex(1), 3.0, 0.5), 1e-15);
    for (double p : {-1.0, 0.0, 0.5, 1.5, 2.0, 3.0}) {
        EXPECT_NEAR(beta_from_alpha(PowerIndex(p), 2.7, 1.0), dual_cumulant(PowerIndex(p), 2.7), 1e-14);
    }
    EXPECT_DOUBLE_EQ(beta_from_alpha(PowerIndex(0), 3.0, 2.0), 0.5);
}

TEST(Properties, NonNegativeAndZeroOnlyOnDiagonal) {
    for (const auto& d : random_draws(10000, 99)) {
        const double b = beta_divergence(d.p, d.x, d.mu);
        const double a = alpha_divergence(d.p, d.x, d.mu);
        EXPECT_GE(b, 0.0);
        EXPECT_GE(a, 0.0);
        if (std::fabs(d.x - d.mu) > 1e-12) {
            EXPECT_GT(b, 0.0);
            EXPECT_GT(a, 0.0);
        }
        EXPECT_EQ(beta_divergence(d.p, d.mu, d.mu), 0.0);
        EXPECT_EQ(alpha_divergence(d.p, d.mu, d.mu), 0.0);
    }
}

TEST(Properties, AffineTiltLeavesBregmanUnchanged) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    for (const auto& d : random_draws(2000, 31)) {
        const auto base = dual_cumulant_generator(d.p);
        const double a = coef(rng), b = coef(rng);
        ConvexGenerator tilted{[=](double t) { return base.value(t) + a * t + b; },
                               [=](double t) { return base.derivative(t) + a; }, base.in_domain};
        const double ref = bregman(base, d.x, d.mu);
        EXPECT_LE(mixed_err(bregman(tilted, d.x, d.mu), ref), 1e-10) << d.p.value() << " " << d.x << " " << d.mu;
    }
}

TEST(Properties, BandBoundaryBranchesAgree) {
    for (double centre : {1.0, 2.0}) {
        for (double side : {-1.0, 1.0}) {
            const double inside = centre + side * kNearSingularBand * (1 - 1e-9);
            const double outside = centre + side * kNearSingularBand * (1 + 1e-9);
            for (double x : {0.05, 0.5, 1.7, 9.0, 120.0}) {
                EXPECT_LE(rel_err(dual_cumulant(PowerIndex(inside), x), dual_cumulant(PowerIndex(outside), x)), 1e-8);
                EXPECT_LE(rel_err(beta_divergence(PowerIndex(inside), x, 2.0),
                                  beta_divergence(PowerIndex(outside), x, 2.0)), 1e-8);
            }
        }
    }
}

TEST(Properties, GradientMatchesCentralDifference) {
    for (const auto& d : random_draws(2000, 41)) {
        const double h = 1e-5 * d.mu;
        const double fd = (beta_divergence(d.p, d.x, d.mu + h) - beta_divergence(d.p, d.x, d.mu - h)) / (2 * h);
        const double g = beta_divergence_dmu(d.p, d.x, d.mu);
        EXPECT_NEAR(g, fd, 1e-6 * (std::fabs(g) + 1e-3 * std::pow(d.mu, -d.p.value())))
            << d.p.value() << " " << d.x << " " << d.mu;
    }
}
