#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gl3lab/errors.hpp"
#include "gl3lab/kuznetsov.hpp"
#include "gl3lab/special_functions.hpp"

using namespace gl3lab;

namespace {

constexpr double pi = std::numbers::pi;
using mp_complex = boost::multiprecision::cpp_complex_100;

// J_{2ir}(x) by the power series in 100-digit arithmetic; the prefactor
// (x/2)^{2ir} / Gamma(1 + 2ir) is taken from log_gamma.
cplx series_j_imag(double r, double x) {
    const mp_complex nu(0, 2 * r);
    const mp_complex z2 = mp_complex(x * x / 4);
    mp_complex term = 1, sum = 1;
    for (int k = 1; k < 2000; ++k) {
        term *= -z2 / (mp_complex(k) * (mp_complex(k) + nu));
        sum += term;
        if (k > x && abs(term) < 1e-40) break;
    }
    const cplx nu_d(0, 2 * r);
    cplx pref = std::exp(nu_d * std::log(x / 2) - log_gamma(1.0 + nu_d));
    return pref * cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
}

// (J_{2ir}(x) - J_{-2ir}(x)) / (i cosh(pi r)) = 2 Im J_{2ir}(x) / cosh(pi r)
double series_kernel(double r, double x) { return 2 * series_j_imag(r, x).imag() / std::cosh(pi * r); }

}  // namespace

TEST_CASE("p_poly zeros, positivity and product oracle") {
    SpectralWeight w{20.0, 4.0};
    CHECK(p_poly(cplx(0, 0.5), w).is_zero());
    CHECK(p_poly(cplx(0, -7.5), w).is_zero());
    CHECK(std::isinf(p_poly(cplx(0, 0.5), w).log_magnitude));
    for (double r : {0.0, 1.3, 20.0, 57.0}) {
        LogValue p = p_poly(r, w);
        CHECK(std::isfinite(p.log_magnitude));
        CHECK(p.phase == 0.0);
    }

    SpectralWeight small{20.0, 4.0, 20};
    cplx r(3.1, 0.4);
    cplx naive = 1.0;
    for (int k = 1; k <= 10; ++k) naive *= (r * r + std::pow(k - 0.5, 2)) / 400.0;
    CHECK(std::abs(p_poly(r, small).to_complex() - naive) <= 1e-12 * std::abs(naive));

    // full degree: P(S) S^300 against a long double product
    long double prod = 1.0L;
    for (int k = 1; k <= 150; ++k) prod *= 400.0L + (k - 0.5L) * (k - 0.5L);
    long double via_log = std::exp(static_cast<long double>(p_poly(20.0, w).log_magnitude) + 300.0L * std::log(20.0L));
    CHECK(std::abs(via_log / prod - 1.0L) <= 1e-9L);
}

TEST_CASE("h_weight evenness, reality and the large-r expansion") {
    SpectralWeight w{30.0, 3.0};
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.1, 60.0);
    for (int i = 0; i < 20; ++i) {
        double r = U(rng);
        cplx a = h_weight(r, 3, 4, w).value, b = h_weight(-r, 3, 4, w).value;
        CHECK(std::abs(a - b) <= 1e-15 * std::abs(a));
        CHECK(h_weight(r, 5, 5, w).value.imag() == 0.0);
        if (r >= 5) CHECK(h_correction(r, 3, 4, w) <= 4.0);
    }

    // small S makes the e^{-2 pi r} correction visible
    SpectralWeight s{2.0, 1.0};
    ScaledValue h = h_weight(s.S, 1, 1, s);
    double p = std::exp(p_poly(s.S, s).log_magnitude - h.log_scale);
    double diff = std::abs(h.value - 2 * p);
    CHECK(diff <= 3 * std::exp(-2 * pi * s.S) * p + 1e-14 * p);
    CHECK(diff > 0.1 * std::exp(-2 * pi * s.S) * p);

    CHECK_THROWS_AS(h_weight(1.0, 0, 1, w), ZeroIndex);
    CHECK_THROWS_AS(SpectralWeight({3.0, 3.0}).validate(), HypothesisViolated);
}

TEST_CASE("bessel kernel matches the cosine-transform identity against the series") {
    for (double r : {0.3, 1.0, 2.5, 5.0})
        for (double x : {0.5, 5.0, 20.0, 50.0}) {
            double a = bessel_j_kernel(r, x), b = series_kernel(r, x);
            CHECK(std::abs(a - b) <= 1e-8);
        }
    // a larger order, relative
    double a = bessel_j_kernel(40.0, 100.0), b = series_kernel(40.0, 100.0);
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(b));
}

TEST_CASE("transform_H against the series Bessel backend") {
    SpectralWeight w{20.0, 4.0};
    ScaledValue a = transform_H(100.0, 1, 1, w);
    ScaledValue b = transform_H(100.0, 1, 1, w, series_kernel);
    CHECK(std::abs(a.value) > 1e-6);
    CHECK(std::abs(a.value - b.value) <= 1e-6 * std::abs(b.value));
    CHECK(a.error <= 1e-2 * std::abs(a.value));

    ScaledValue twice = transform_H(100.0, 1, 1, w, [](double r, double x) { return 2 * bessel_j_kernel(r, x); });
    CHECK(std::abs(twice.value - 2.0 * a.value) <= 1e-12 * std::abs(a.value));

    // small x: far below any visible scale
    double x = w.S / 10;
    ScaledValue small = transform_H(x, 1, 1, w);
    CHECK(std::abs(small.value) <= 1e-10 * w.S * w.D);
    CHECK_THROWS_AS(transform_H(0.0, 1, 1, w), NonPositiveArgument);
}

TEST_CASE("k-hat and H_pm") {
    SpectralWeight w{30.0, 3.0};
    KTransform kt(w);
    for (double y : {0.0, 0.3, -1.1, 2.0}) {
        cplx fh = fourier_hat([&](double r) { return kt.k(r); }, kt.rho_lo(), kt.rho_hi(), y, 80);
        CHECK(std::abs(kt.hat(y) - fh) <= 1e-10 * std::abs(kt.hat(0.0)));
    }
    double c6 = khat_decay_constant(w);
    CHECK(std::isfinite(c6));
    CHECK(std::abs(kt.hat(10.0)) * std::pow(11.0, 6) <= c6);
    CHECK(std::abs(kt.hat(5.0)) <= 1e-10 * std::abs(kt.hat(0.0)));

    // values are in units of the weight peak
    ScaledValue p = transform_H_pm(kt, 1, 5, 6, w, +1), m = transform_H_pm(kt, 1, 6, 5, w, -1);
    CHECK(std::abs(p.value) > 1e-5);
    CHECK(std::abs(p.value - std::conj(m.value)) <= 1e-12);

    SpectralWeight big{40.0, 5.0};
    KTransform kb(big);
    for (auto [mm, c] : {std::pair{1L, 1L}, {2L, 1L}, {5L, 2L}}) {
        double x = 4 * pi * mm / c;
        REQUIRE(x <= big.S * 8 / 10);
        for (int s : {1, -1}) CHECK(std::abs(transform_H_pm(kb, c, mm, mm, big, s).value) <= 1e-6 * big.S * big.D);
    }
    CHECK_THROWS_AS(transform_H_pm(kt, 0, 1, 1, w, 1), NonPositiveModulus);
}

TEST_CASE("verify_kmncalc in the x of order SR regime") {
    SpectralWeight w{15.0, 3.0};
    const double x = 4 * pi * 5 / 2;
    auto rep = verify_kmncalc(5, 5, 2, w, x / (2 * w.S));
    CHECK(rep.x == doctest::Approx(x));
    CHECK(rep.rel_err <= 1e-2);
    CHECK(rep.abs_err <= 1e-10);
    CHECK(rep.quadrature_err <= 1e-2 * std::abs(rep.H));
    CHECK(rep.H0_constant > 0.0);
    CHECK(rep.H0_constant < 10.0);
    CHECK(std::abs(rep.H_minus - std::conj(rep.H_plus)) <= 1e-12);

    CHECK_THROWS_AS(verify_kmncalc(10, 12, 1, w, 10.0), HypothesisViolated);
}
