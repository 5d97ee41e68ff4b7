#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "flowlines/errors.hpp"
#include "flowlines/spectra.hpp"
#include "oracles.hpp"

using namespace flowlines;
using std::numbers::pi;

namespace {

AnalyticLine cos_line(int K) {
    return spectra::sample_line([](double x) { return std::cos(x); }, K);
}

// e^{-s|k|} / (1 + k^2) for |k| <= K.
AnalyticLine decaying(int K, double s, double power = 1.0) {
    AnalyticLine a(K);
    for (int k = -K; k <= K; ++k) a[k] = std::exp(-s * std::abs(k)) / std::pow(1.0 + k * k, power);
    return a;
}

}  // namespace

TEST(Analyze, CosineHasTwoModes) {
    const auto a = cos_line(4);
    EXPECT_NEAR(a[1].real(), 0.5, 1e-15);
    EXPECT_NEAR(a[-1].real(), 0.5, 1e-15);
    for (int k : {-4, -3, -2, 0, 2, 3, 4}) EXPECT_NEAR(std::abs(a[k]), 0.0, 1e-15);
}

TEST(Analyze, ConstantLine) {
    const auto a = spectra::sample_line([](double) { return 2.5; }, 3);
    EXPECT_NEAR(a[0].real(), 2.5, 1e-15);
    EXPECT_NEAR(spectra::x_norm(a, 0.3, 2.0), 2.5, 1e-14);
}

TEST(Analyze, TooFewSamples) {
    const std::vector<double> s(8, 1.0);
    EXPECT_THROW(spectra::fourier_analyze(std::span<const double>(s), 4), ResolutionError);
}

TEST(Analyze, RoundtripRandomLines) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int K = 5 + 3 * trial;
        const auto a = oracle::random_line(rng, K, 1.0, 0.1);
        const auto v = spectra::synthesize_real(a, 2 * K + 1 + trial);
        const auto b = spectra::fourier_analyze(std::span<const double>(v), K);
        EXPECT_LE(spectra::max_abs_diff(a, b), 1e-12);
    }
}

TEST(Evaluate, AgreesWithDirectSum) {
    std::mt19937_64 rng(3);
    const auto a = oracle::random_line(rng, 20, 1.0, 0.3);
    for (Complex z : {Complex(0.3, 0.0), Complex(1.7, 0.1), Complex(-2.0, -0.25)}) {
        EXPECT_NEAR(std::abs(spectra::evaluate(a, z) - oracle::naive_eval(a, z)), 0.0, 1e-12);
    }
}

TEST(DiffX, CosineToMinusSine) {
    const auto d = spectra::diff_x(cos_line(6), 1);
    for (double x : {0.0, 0.4, 2.0, 5.5}) EXPECT_NEAR(spectra::evaluate(d, x).real(), -std::sin(x), 1e-14);
}

TEST(DiffX, PsiOnlyFamilyHasZeroXDerivative) {
    const auto a = spectra::sample_family([](double, double s) { return s; }, 8, 16);
    EXPECT_LE(spectra::y_norm(spectra::diff_x(a, 1), 0.0, 0), 1e-15);
}

TEST(DiffX, SecondOrderAgreementWithCentredDifferences) {
    std::mt19937_64 rng(5);
    const auto a = oracle::random_line(rng, 12, 1.0, 0.4);
    const auto d = spectra::diff_x(a, 1);
    auto err = [&](double h) {
        double e = 0.0;
        for (double x = 0.0; x < 2.0 * pi; x += 0.37) {
            const double fd = (spectra::evaluate(a, x + h).real() - spectra::evaluate(a, x - h).real()) / (2.0 * h);
            e = std::max(e, std::abs(fd - spectra::evaluate(d, x).real()));
        }
        return e;
    };
    EXPECT_NEAR(std::log2(err(1e-2) / err(5e-3)), 2.0, 0.1);
}

TEST(DiffPsi, LinearAndQuadraticExact) {
    const auto a = spectra::sample_family([](double, double s) { return s; }, 4, 32);
    const auto b = spectra::sample_family([](double, double s) { return s * s; }, 4, 32);
    const auto da = spectra::diff_psi(a, 1);
    const auto db = spectra::diff_psi(b, 2);
    for (int j = 0; j <= 32; ++j) {
        EXPECT_NEAR(da(0, j).real(), 1.0, 1e-12);
        EXPECT_NEAR(db(0, j).real(), 2.0, 1e-9);
    }
}

TEST(DiffPsi, FourthOrderOnSine) {
    auto err = [](int n, int order) {
        const auto a = spectra::sample_family([](double, double s) { return std::sin(pi * s); }, 2, n);
        const auto d = spectra::diff_psi(a, order);
        double e = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double s = a.psi(j);
            const double exact = order == 1 ? pi * std::cos(pi * s) : -pi * pi * std::sin(pi * s);
            e = std::max(e, std::abs(d(0, j).real() - exact));
        }
        return e;
    };
    for (int order : {1, 2}) {
        EXPECT_GE(std::log2(err(32, order) / err(64, order)), 3.5) << order;
        EXPECT_LE(err(128, order), 1e-5);
    }
}

TEST(DiffPsi, TooFewRows) {
    const FlowFamily a(2, 3);
    EXPECT_THROW(spectra::diff_psi(a, 1), ResolutionError);
}

TEST(XNorm, Examples) {
    EXPECT_NEAR(spectra::x_norm(AnalyticLine::constant(1.0, 5), 0.7, 3.5), 1.0, 1e-15);
    EXPECT_NEAR(spectra::x_norm(cos_line(4), 0.5, 0.0), oracle::kSqrtHalfE, 1e-10);
    EXPECT_NEAR(spectra::x_norm(cos_line(4), 0.0, 1.0), 1.0, 1e-14);
}

TEST(XNorm, MatchesDirectSum) {
    std::mt19937_64 rng(7);
    for (double sigma : {0.0, 0.1, 0.3}) {
        for (double order : {0.0, 0.5, 1.5, 2.5, 4.0}) {
            const auto a = oracle::random_line(rng, 30, 1.0, 0.35);
            EXPECT_NEAR(spectra::x_norm(a, sigma, order) / oracle::naive_x_norm(a, sigma, order), 1.0, 1e-12);
        }
    }
}

TEST(XNorm, ParsevalAtZeroWeight) {
    std::mt19937_64 rng(8);
    const auto a = oracle::random_line(rng, 16, 1.0, 0.2);
    const int n = 64;
    const auto v = spectra::synthesize_real(a, n);
    double s = 0.0;
    for (double x : v) s += x * x;
    EXPECT_NEAR(spectra::x_norm(a, 0.0, 0.0), std::sqrt(s / n), 1e-12);
}

TEST(XNorm, BoundaryCharacterization) {
    std::mt19937_64 rng(9);
    for (int m = 0; m <= 3; ++m) {
        for (double sigma : {0.1, 0.3}) {
            const auto a = oracle::random_line(rng, 24, 1.0, 0.5);
            const double inner = spectra::x_norm(a, sigma, m);
            const double edge = spectra::boundary_norm(a, sigma, m);
            const double up = spectra::x_norm(spectra::evaluate_on_strip(a, sigma, sigma), 0.0, m);
            const double down = spectra::x_norm(spectra::evaluate_on_strip(a, -sigma, sigma), 0.0, m);
            EXPECT_NEAR(edge, std::hypot(up, down), 1e-10 * edge);
            EXPECT_LE(inner, edge * (1.0 + 1e-12));
            EXPECT_LE(edge, std::sqrt(2.0) * inner * (1.0 + 1e-12));
        }
    }
}

TEST(XNorm, MonotoneInOrderAndSigma) {
    std::mt19937_64 rng(10);
    const auto a = oracle::random_line(rng, 20, 1.0, 0.3);
    double prev = 0.0;
    for (double order = 0.0; order <= 4.0; order += 0.5) {
        const double v = spectra::x_norm(a, 0.2, order);
        EXPECT_GE(v, prev);
        prev = v;
    }
    prev = 0.0;
    for (double sigma = 0.0; sigma <= 0.5; sigma += 0.1) {
        const double v = spectra::x_norm(a, sigma, 2.0);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(YNorm, Examples) {
    const auto psi = spectra::sample_family([](double, double s) { return s; }, 4, 128);
    EXPECT_NEAR(spectra::y_norm(psi, 0.1, 2), oracle::kTwoOverSqrt3, 1e-10);
    EXPECT_EQ(spectra::y_norm(FlowFamily(4, 16), 0.3, 4), 0.0);
    const auto c = spectra::broadcast(cos_line(4), 32);
    EXPECT_NEAR(spectra::y_norm(c, 0.5, 0), oracle::kSqrtHalfE, 1e-10);
}

TEST(YNorm, OrderAboveFourRejected) {
    const FlowFamily a(4, 16);
    EXPECT_THROW(spectra::y_norm(a, 0.1, 5), CapabilityError);
}

TEST(YNorm, MonotoneInOrderAndSigma) {
    std::mt19937_64 rng(12);
    const auto a = oracle::random_family(rng, 16, 64, 1.0, 0.3, false);
    double prev = 0.0;
    for (int m = 0; m <= 4; ++m) {
        const double v = spectra::y_norm(a, 0.1, m);
        EXPECT_GE(v, prev);
        prev = v;
    }
    prev = 0.0;
    for (double sigma : {0.0, 0.05, 0.1, 0.2, 0.4}) {
        const double v = spectra::y_norm(a, sigma, 2);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(Strip, EvaluateOnStrip) {
    const auto one = spectra::evaluate_on_strip(AnalyticLine::constant(1.0, 3), 0.2, 0.3);
    EXPECT_NEAR(one[0].real(), 1.0, 1e-15);
    const auto c = spectra::evaluate_on_strip(cos_line(3), 0.2, 0.3);
    EXPECT_NEAR(c[1].real(), 0.5 * std::exp(-0.2), 1e-15);
    EXPECT_NEAR(c[-1].real(), 0.5 * std::exp(0.2), 1e-15);
    EXPECT_LE(spectra::max_abs_diff(spectra::evaluate_on_strip(cos_line(3), 0.0, 0.3), cos_line(3)), 0.0);
    EXPECT_THROW(spectra::evaluate_on_strip(cos_line(3), 0.31, 0.3), DomainError);
}

TEST(Strip, EvaluateOnStripMatchesComplexEvaluation) {
    std::mt19937_64 rng(13);
    const auto a = oracle::random_line(rng, 16, 1.0, 0.5);
    const auto b = spectra::evaluate_on_strip(a, 0.25, 0.3);
    for (double x : {0.1, 1.3, 4.0}) {
        EXPECT_NEAR(std::abs(spectra::evaluate(b, x) - oracle::naive_eval(a, Complex(x, 0.25))), 0.0, 1e-12);
    }
}

TEST(Strip, EstimateRecoversDecay) {
    EXPECT_NEAR(spectra::strip_estimate(decaying(64, 0.4)).value, 0.4, 0.02);
    EXPECT_NEAR(spectra::strip_estimate(decaying(128, 0.1, 0.0)).value, 0.1, 0.005);
    for (double s : {0.05, 0.1, 0.2, 0.5, 1.0}) {
        const auto e = spectra::strip_estimate(decaying(64, s));
        ASSERT_TRUE(e.finite()) << s;
        EXPECT_NEAR(e.value, s, 0.05 * s) << s;
    }
}

TEST(Strip, EntireAndUndefined) {
    const auto tri = spectra::sample_line([](double x) { return 1.0 + std::cos(x) + 0.2 * std::sin(3.0 * x); }, 32);
    EXPECT_EQ(spectra::strip_estimate(tri).kind, StripEstimate::Kind::entire);
    EXPECT_EQ(spectra::strip_estimate(AnalyticLine(16)).kind, StripEstimate::Kind::undefined);
}

TEST(Restrict, BoundaryRows) {
    const auto a = spectra::sample_family([](double x, double s) { return s + 0.1 * std::cos(x); }, 8, 16);
    const auto top = spectra::restrict_line(a, 16);
    const auto expect_top = spectra::sample_line([](double x) { return 1.0 + 0.1 * std::cos(x); }, 8);
    EXPECT_LE(spectra::max_abs_diff(top, expect_top), 1e-15);
    const auto bottom = spectra::restrict_line(a, 0);
    EXPECT_LE(spectra::max_abs_diff(bottom, 0.1 * cos_line(8)), 1e-15);
    EXPECT_THROW(spectra::restrict_line(a, 17), DomainError);
    EXPECT_THROW(spectra::restrict_line(a, -1), DomainError);
}

TEST(Restrict, TraceBoundedByFamilyNorm) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = oracle::random_family(rng, 24, 64, 1.0, 0.4, false);
        const double whole = spectra::y_norm(a, 0.1, 3);
        for (int j : {0, 64}) {
            const double tr = spectra::x_norm(spectra::restrict_line(a, j), 0.1, 2.5);
            EXPECT_TRUE(std::isfinite(tr));
            EXPECT_LE(tr, 10.0 * whole);
        }
    }
}

TEST(RealSymmetry, PreservedByDerivatives) {
    std::mt19937_64 rng(15);
    const auto a = oracle::random_family(rng, 12, 32, 1.0, 0.3, false);
    for (const auto& b : {spectra::diff_x(a, 1), spectra::diff_x(a, 2), spectra::diff_psi(a, 1), spectra::diff_psi(a, 2)}) {
        for (int j = 0; j <= 32; ++j) EXPECT_TRUE(spectra::restrict_line(b, j).is_real(1e-12));
    }
}

TEST(Symmetries, ShiftAndReflect) {
    std::mt19937_64 rng(16);
    const auto a = oracle::random_line(rng, 10, 1.0, 0.2);
    const auto s = spectra::shift_x(a, 0.7);
    const auto r = spectra::reflect_x(a);
    for (double x : {0.0, 1.1, 3.3}) {
        EXPECT_NEAR(spectra::evaluate(s, x).real(), spectra::evaluate(a, x + 0.7).real(), 1e-13);
        EXPECT_NEAR(spectra::evaluate(r, x).real(), spectra::evaluate(a, -x).real(), 1e-13);
    }
    const auto fam = oracle::random_family(rng, 6, 16, 1.0, 0.2, false);
    const auto twice = spectra::reflect_psi(spectra::reflect_psi(fam));
    EXPECT_EQ(spectra::max_abs_diff(fam, twice), 0.0);
    const auto rp = spectra::reflect_psi(fam);
    EXPECT_EQ(rp(2, 3), fam(2, 13));
}
