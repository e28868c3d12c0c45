#include "bayescmp/error.hpp"
#include "bayescmp/stat_kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace bayescmp;

namespace {

double student_pdf(double t, double dof) {
    return std::exp(std::lgamma(0.5 * (dof + 1)) - std::lgamma(0.5 * dof)) / std::sqrt(dof * std::numbers::pi) *
           std::pow(1.0 + t * t / dof, -0.5 * (dof + 1));
}

// 0.5 + integral of the density over [0, t] by composite Simpson.
double cdf_by_quadrature(double t, double dof) {
    const int n = 20000;
    const double h = t / n;
    double s = student_pdf(0.0, dof) + student_pdf(t, dof);
    for (int i = 1; i < n; ++i) {
        s += (i % 2 ? 4.0 : 2.0) * student_pdf(i * h, dof);
    }
    return 0.5 + s * h / 3.0;
}

double bisect_quantile(double p, double dof) {
    double lo = -50.0, hi = 50.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (student_cdf(mid, {dof, 0.0, 1.0}) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Dense multivariate normal log density with compound-symmetry covariance,
// through an explicit Cholesky factorisation.
double dense_cs_logpdf(const std::vector<double>& x, double mu, double sigma2, double rho) {
    const std::size_t n = x.size();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = sigma2 * (i == j ? 1.0 : rho);
        }
    }
    std::vector<double> l(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) {
            d -= l[j * n + k] * l[j * n + k];
        }
        l[j * n + j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) {
                v -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = v / l[j * n + j];
        }
    }
    std::vector<double> y(n);
    double logdet = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i] - mu;
        for (std::size_t k = 0; k < i; ++k) {
            v -= l[i * n + k] * y[k];
        }
        y[i] = v / l[i * n + i];
        quad += y[i] * y[i];
        logdet += 2.0 * std::log(l[i * n + i]);
    }
    return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * logdet - 0.5 * quad;
}

} // namespace

TEST(StudentCdf, CentreIsHalf) {
    EXPECT_DOUBLE_EQ(student_cdf(0.3, {7.0, 0.3, 2.0}), 0.5);
}

TEST(StudentCdf, CauchyClosedForm) {
    EXPECT_NEAR(student_cdf(1.0, {1.0, 0.0, 1.0}), 0.75, 1e-15);
    for (double x : {-20.0, -3.0, -0.4, 0.1, 2.5, 40.0}) {
        EXPECT_NEAR(student_cdf(x, {1.0, 0.0, 1.0}), 0.5 + std::atan(x) / std::numbers::pi, 1e-14) << x;
    }
}

TEST(StudentCdf, TwoDofClosedForm) {
    for (double x : {-7.0, -1.0, 0.5, 3.0}) {
        EXPECT_NEAR(student_cdf(x, {2.0, 0.0, 1.0}), 0.5 + x / (2.0 * std::sqrt(2.0 + x * x)), 1e-14) << x;
    }
}

TEST(StudentCdf, MatchesQuadrature) {
    for (double dof : {1.5, 3.0, 9.0, 30.0, 99.0}) {
        for (double t : {-6.0, -2.2, -0.7, 0.4, 1.3, 4.0}) {
            EXPECT_NEAR(student_cdf(t, {dof, 0.0, 1.0}), cdf_by_quadrature(t, dof), 1e-12) << dof << " " << t;
        }
    }
}

TEST(StudentCdf, StandardisedTailOfPublishedStatistic) {
    const LocScaleStudent d{99.0, 0.0, 1.0 / 99.0};
    const double one = student_cdf(-3.52 / std::sqrt(99.0), d);
    EXPECT_NEAR(one, 0.000325, 0.00001);
    EXPECT_NEAR(2.0 * one, 0.00065, 0.00002);
}

TEST(StudentCdf, SymmetricAndMonotone) {
    const LocScaleStudent d{4.5, -0.2, 0.3};
    double prev = 0.0;
    for (double delta = -5.0; delta <= 5.0; delta += 0.05) {
        const double c = student_cdf(d.loc + delta, d);
        EXPECT_NEAR(c + student_cdf(d.loc - delta, d), 1.0, 1e-12);
        EXPECT_GE(c, prev);
        prev = c;
        EXPECT_NEAR(student_sf(d.loc + delta, d), 1.0 - c, 1e-12);
    }
}

TEST(StudentCdf, PointMass) {
    const LocScaleStudent d{5.0, 0.1, 0.0};
    EXPECT_EQ(student_cdf(0.0999, d), 0.0);
    EXPECT_EQ(student_cdf(0.1, d), 1.0);
    EXPECT_EQ(student_sf(0.1, d), 0.0);
    EXPECT_THROW((LocScaleStudent{0.0, 0.0, 1.0}.validate()), DomainError);
}

TEST(StudentQuantile, KnownValues) {
    EXPECT_DOUBLE_EQ(student_quantile(0.5, {12.0, 0.7, 4.0}), 0.7);
    EXPECT_NEAR(student_quantile(0.975, {99.0, 0.0, 1.0}), 1.9842, 1e-4);
    EXPECT_NEAR(student_quantile(0.975, {99.0, 0.0, 1.0}), bisect_quantile(0.975, 99.0), 1e-10);
    EXPECT_NEAR(student_quantile(0.75, {1.0, 0.0, 1.0}), std::tan(std::numbers::pi * 0.25), 1e-12);
}

TEST(StudentQuantile, InvertsCdf) {
    for (double dof : {0.8, 2.0, 10.0, 99.0}) {
        for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999}) {
            const LocScaleStudent d{dof, 1.0, 0.25};
            EXPECT_NEAR(student_cdf(student_quantile(p, d), d), p, 1e-10) << dof << " " << p;
        }
    }
}

TEST(StudentQuantile, RejectsOutsideOpenInterval) {
    EXPECT_THROW(student_quantile(0.0, {3.0, 0.0, 1.0}), DomainError);
    EXPECT_THROW(student_quantile(1.0, {3.0, 0.0, 1.0}), DomainError);
    EXPECT_THROW(student_quantile(-0.1, {3.0, 0.0, 1.0}), DomainError);
}

TEST(StudentLogpdf, MatchesDensity) {
    EXPECT_NEAR(student_logpdf(0.3, 6.0, 0.1, 0.5), std::log(student_pdf(0.4, 6.0) / 0.5), 1e-13);
}

TEST(NormalCdf, KnownValues) {
    EXPECT_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.959964), 0.975, 1e-7);
    EXPECT_NEAR(1.0 - normal_cdf(4.8), 7.93e-7, 1e-9);
    EXPECT_NEAR(2.0 * normal_cdf(-4.8), 1.59e-6, 1e-8);
    for (double x : {-3.0, -1.0, 0.5, 2.0}) {
        EXPECT_NEAR(normal_cdf(x), 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2)), 1e-15);
    }
}

TEST(RngTest, StreamsAreReproducibleAndDistinct) {
    Rng a(RngStream{5, 9}), b(RngStream{5, 9}), c(RngStream{5, 10});
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        differs |= x != c.next_u64();
    }
    EXPECT_TRUE(differs);
    EXPECT_EQ((RngStream{1, 2}.derive(3)), (RngStream{1, 2}.derive(3)));
    EXPECT_NE((RngStream{1, 2}.derive(3)), (RngStream{1, 2}.derive(4)));
}

TEST(RngTest, UniformNormalGammaMoments) {
    Rng r(RngStream{3, 0});
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0, sg = 0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = r.normal();
        sn += z;
        sn2 += z * z;
        sg += r.gamma(0.3);
    }
    EXPECT_NEAR(su / n, 0.5, 3 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sn / n, 0.0, 3 * std::sqrt(1.0 / n));
    EXPECT_NEAR(sn2 / n, 1.0, 3 * std::sqrt(2.0 / n));
    EXPECT_NEAR(sg / n, 0.3, 3 * std::sqrt(0.3 / n));
    EXPECT_THROW(r.gamma(0.0), DomainError);
}

TEST(RngTest, IndexIsUniform) {
    Rng r(RngStream{8, 1});
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        ++counts[r.index(7)];
    }
    for (int c : counts) {
        EXPECT_NEAR(c, 10000, 400);
    }
}

namespace {

void expect_dirichlet_mean(const std::vector<double>& alpha, std::size_t count, std::size_t coord) {
    const Matrix m = sample_dirichlet(alpha, count, RngStream{21, coord});
    double total = 0.0;
    for (double a : alpha) {
        total += a;
    }
    const double expect = alpha[coord] / total;
    double s = 0.0;
    for (std::size_t r = 0; r < count; ++r) {
        s += m(r, coord);
    }
    const double var = expect * (1.0 - expect) / (total + 1.0);
    EXPECT_NEAR(s / count, expect, 3.0 * std::sqrt(var / count));
}

} // namespace

TEST(SampleDirichlet, MarginalMeans) {
    expect_dirichlet_mean({1.0, 1.0}, 200000, 0);
    std::vector<double> big(55, 1.0);
    big[0] = 0.5;
    expect_dirichlet_mean(big, 200000, 0);
    expect_dirichlet_mean({2.0, 1.0}, 1000000, 0);
}

TEST(SampleDirichlet, RowsAreOnTheSimplex) {
    const Matrix m = sample_dirichlet(std::vector<double>{0.05, 0.5, 3.0}, 5000, RngStream{2, 2});
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double s = 0.0;
        for (double w : m.row(r)) {
            EXPECT_GE(w, 0.0);
            s += w;
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(SampleDirichlet, IndependentOfThreadCount) {
    const std::vector<double> alpha{0.5, 1.0, 1.0, 1.0};
    const Matrix one = sample_dirichlet(alpha, 10000, RngStream{4, 4}, 1);
    const Matrix many = sample_dirichlet(alpha, 10000, RngStream{4, 4}, 3);
    EXPECT_EQ(one, many);
}

TEST(SampleDirichlet, RejectsNonPositiveAlpha) {
    EXPECT_THROW(sample_dirichlet(std::vector<double>{1.0, 0.0}, 10, RngStream{}), DomainError);
    EXPECT_THROW(sample_dirichlet(std::vector<double>{1.0, -1.0}, 10, RngStream{}), DomainError);
    EXPECT_THROW(sample_dirichlet(std::vector<double>{1.0}, 0, RngStream{}), DomainError);
}

TEST(CsLoglik, UnivariateReduction) {
    const double x = 0.3, mu = 0.1, s2 = 0.04;
    const double expect = -0.5 * std::log(2 * std::numbers::pi * s2) - (x - mu) * (x - mu) / (2 * s2);
    EXPECT_NEAR(cs_loglik(x, 0.0, 1, mu, s2, 0.0), expect, 1e-14);
}

TEST(CsLoglik, ZeroResidualAtTheMean) {
    const double n = 5, s2 = 0.2, rho = 0.4;
    const double l1 = s2 * (1 + (n - 1) * rho), l2 = s2 * (1 - rho);
    const double expect = -0.5 * n * std::log(2 * std::numbers::pi) - 0.5 * std::log(l1) - 0.5 * (n - 1) * std::log(l2);
    EXPECT_NEAR(cs_loglik(0.1, 0.0, 5, 0.1, s2, rho), expect, 1e-13);
}

TEST(CsLoglik, MatchesDenseOracle) {
    Rng r(RngStream{77, 0});
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const double rho = trial == 0 ? 0.3 : 0.9 * r.uniform();
        const double s2 = 0.01 + r.uniform();
        const double mu = r.normal();
        std::vector<double> x(n);
        double mean = 0.0;
        for (auto& v : x) {
            v = r.normal();
            mean += v;
        }
        mean /= n;
        double ss = 0.0;
        for (double v : x) {
            ss += (v - mean) * (v - mean);
        }
        EXPECT_NEAR(cs_loglik(mean, ss, n, mu, s2, rho), dense_cs_logpdf(x, mu, s2, rho), 1e-8) << trial;
    }
}

TEST(CsLoglik, DomainErrors) {
    EXPECT_THROW(cs_loglik(0, 0, 3, 0, 0.0, 0.1), DomainError);
    EXPECT_THROW(cs_loglik(0, 0, 3, 0, 1.0, 1.0), DomainError);
    EXPECT_THROW(cs_loglik(0, 0, 3, 0, 1.0, -0.1), DomainError);
}
