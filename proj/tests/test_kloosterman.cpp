#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "gl3lab/errors.hpp"
#include "gl3lab/kloosterman.hpp"

using namespace gl3lab;

namespace {

// direct definition with std::exp, no table
cplx naive_kloosterman(long a, long b, long c) {
    cplx s = 0.0;
    for (long x = 1; x <= c; ++x) {
        if (std::gcd(x, c) != 1) continue;
        long xb = 1;
        while ((x * xb) % c != 1 % c) ++xb;
        s += std::exp(cplx(0, 2 * std::numbers::pi * double(a * x + b * xb) / double(c)));
    }
    return s;
}

}  // namespace

TEST_CASE("kloosterman_sum small cases") {
    CHECK(std::abs(kloosterman_sum(5, 7, 1) - 1.0) < 1e-15);
    CHECK(std::abs(kloosterman_sum(1, 1, 2) - 1.0) < 1e-15);
    CHECK(std::abs(kloosterman_sum(0, 1, 4)) < 1e-15);
    CHECK(std::abs(ramanujan_sum(1, 4)) < 1e-15);
    CHECK_THROWS_AS(kloosterman_sum(1, 1, 0), NonPositiveModulus);
    for (long c = 1; c <= 25; ++c)
        for (long a = -3; a < 6; ++a)
            for (long b = 0; b < 5; ++b) CHECK(std::abs(kloosterman_sum(a, b, c) - naive_kloosterman(a, b, c)) < 1e-12);
}

TEST_CASE("kloosterman symmetries") {
    for (long c = 1; c <= 30; ++c)
        for (long a = -4; a <= 4; ++a)
            for (long b = -4; b <= 4; ++b) {
                cplx s = kloosterman_sum(a, b, c);
                CHECK(std::abs(s - kloosterman_sum(b, a, c)) < 1e-12 * c);
                CHECK(std::abs(s - std::conj(kloosterman_sum(-a, -b, c))) < 1e-12 * c);
                CHECK(std::abs(s.imag()) < 1e-12 * c);
            }
}

TEST_CASE("modular helpers") {
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(mod_inverse(-1, 10) == 9);
    CHECK_THROWS_AS(mod_inverse(4, 6), NonCoprime);
    CHECK(divides_power(4, 6));
    CHECK(divides_power(9, 12));
    CHECK(!divides_power(2, 3));
    CHECK(divides_power(1, 1));
    CHECK(!divides_power(2, 1));
}

TEST_CASE("Weil bound") {
    auto w = weil_sweep(97);
    MESSAGE("worst |S|/(2 sqrt p) = " << w.worst_ratio << " at p=" << w.worst_p);
    CHECK(w.worst_ratio <= 1.0 + 1e-12);
    CHECK(w.sums > 0);
}

TEST_CASE("lemma 9.2") {
    ExpCoefficients c;
    c.set(1, {1, 2});
    c.set(3, {-0.5, 0});
    auto triv = verify_lemma_9_2(1, 1, c);
    double total = std::norm(cplx(1, 2) + cplx(-0.5, 0));
    CHECK(triv.lhs == doctest::Approx(total));
    CHECK(triv.rhs == doctest::Approx(total));
    auto r = verify_lemma_9_2(4, 2, random_coefficients(30, 7));
    CHECK(r.abs_err <= 1e-8 * std::max(1.0, r.rhs));
    CHECK_THROWS_AS(verify_lemma_9_2(3, 2, c), HypothesisViolated);
    CHECK_NOTHROW(verify_lemma_9_2(6, 4, c));
}

TEST_CASE("lemma 9.2 sweep") {
    double worst = 0;
    int cells = 0;
    for (long b = 1; b <= 12; ++b)
        for (long r : {1, 2, 3, 4, 8, 9}) {
            if (!divides_power(r, b)) continue;
            ++cells;
            for (int k = 0; k < 20; ++k) {
                auto rep = verify_lemma_9_2(b, r, random_coefficients(24, 1000 * b + 10 * r + k));
                worst = std::max(worst, rep.abs_err / std::max(1.0, rep.rhs));
            }
        }
    CHECK(cells > 10);
    CHECK(worst <= 1e-8);
}

TEST_CASE("lemma 9.3") {
    auto a = random_coefficients(12, 11);
    auto one = verify_lemma_9_3(1, a);
    CHECK(std::abs(one.lhs - one.rhs) < 1e-12 * one.rhs);
    auto r = verify_lemma_9_3(6, a);
    CHECK(r.slack >= -1e-9 * r.rhs);
    // coefficients on multiples of s: report only
    ExpCoefficients m;
    for (int k = 1; k <= 5; ++k) m.set(6 * k, {double(k), 0});
    auto rm = verify_lemma_9_3(6, m);
    MESSAGE("multiples of s: lhs=" << rm.lhs << " rhs=" << rm.rhs);
    CHECK(rm.slack >= -1e-9 * rm.rhs);
}

TEST_CASE("lemma 9.4") {
    ExpCoefficients a;
    a.set(1, {0.3, -1});
    a.set(2, {2, 0.5});
    auto one = verify_lemma_9_4(1, 1, 1, a);
    double total = std::norm(cplx(0.3, -1) + cplx(2, 0.5));
    CHECK(one.lhs == doctest::Approx(total));
    CHECK(one.rhs == doctest::Approx(total));
    auto r = verify_lemma_9_4(4, 3, 2, random_coefficients(24, 3));
    CHECK(r.slack >= -1e-9 * r.rhs);
    CHECK_THROWS_AS(verify_lemma_9_4(4, 2, 2, a), HypothesisViolated);
    CHECK_THROWS_AS(verify_lemma_9_4(3, 5, 2, a), HypothesisViolated);
}

TEST_CASE("multiplicativity of Kloosterman sums") {
    double worst = 0;
    for (long b : {1, 2, 3, 4, 5})
        for (long s : {1, 3, 7})
            for (long r : {1, 2, 4}) {
                if (std::gcd(s, b * r) != 1) continue;
                for (long x : {1, 2, 5})
                    for (long y : {1, 3})
                        for (long n : {0, 1, 6, 11}) worst = std::max(worst, multiplicativity_residual(b, s, r, x, y, n));
            }
    CHECK(worst < 1e-10);
}

TEST_CASE("coefficients are reproducible and homogeneous") {
    auto a = random_coefficients(10, 5), b = random_coefficients(10, 5);
    CHECK(a.values == b.values);
    auto r1 = verify_lemma_9_2(8, 4, a);
    auto r2 = verify_lemma_9_2(8, 4, a.scaled({0, 3}));
    CHECK(r2.lhs / r1.lhs == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(r2.rhs / r1.rhs == doctest::Approx(9.0).epsilon(1e-12));
    CHECK_THROWS_AS(a.set(0, 1.0), ZeroIndex);
}
