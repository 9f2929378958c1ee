#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gl3lab/errors.hpp"
#include "gl3lab/spectral_params.hpp"

using namespace gl3lab;
using cplx = std::complex<double>;

namespace {

// slot values (alpha, beta, gamma) straight from the defining equations, unsorted
std::array<double, 3> slots(const SpectralType& nu) {
    const cplx I(0, 1);
    return {((1.0 - nu.nu1 - 2.0 * nu.nu2) / I).real(), ((nu.nu2 - nu.nu1) / I).real(),
            ((2.0 * nu.nu1 + nu.nu2 - 1.0) / I).real()};
}

// nu from i beta = -nu1 + nu2 and i gamma = 2 nu1 + nu2 - 1
SpectralType solve_nu(double beta, double gamma) {
    const cplx I(0, 1);
    cplx nu1 = (I * gamma + 1.0 - I * beta) / 3.0;
    return {nu1, nu1 + I * beta};
}

LanglandsTriple random_triple(std::mt19937_64& rng, double scale, bool beta_nonneg) {
    std::uniform_real_distribution<double> d(-scale, scale);
    double a = d(rng), b = d(rng);
    auto t = make_triple(a, b, -a - b);
    if (beta_nonneg && t.beta < 0) t = dual(t);
    return t;
}

}  // namespace

TEST_CASE("to_langlands") {
    auto t = to_langlands({cplx(1.0 / 3, 0), cplx(1.0 / 3, 0)});
    CHECK(std::abs(t.alpha) + std::abs(t.beta) + std::abs(t.gamma) < 1e-15);
    auto t2 = to_langlands({cplx(1.0 / 3, 1.0 / 3), cplx(1.0 / 3, -1.0 / 3)});
    CHECK(std::abs(t2.sum()) < 1e-14);
    CHECK(t2.valid());
    CHECK_THROWS_AS(to_langlands({cplx(0.5, 0), cplx(0.2, 0)}), NonTempered);
    auto nt = to_langlands({cplx(0.5, 0), cplx(0.2, 0)}, true);
    CHECK(std::abs(nt.sum()) < 1e-14);
}

TEST_CASE("to_langlands round trip on random tempered types") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> d(-20, 20);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        SpectralType nu{cplx(1.0 / 3, d(rng)), cplx(1.0 / 3, d(rng))};
        CHECK(nu.tempered());
        auto t = to_langlands(nu);
        auto s = slots(nu);
        std::array<double, 3> sorted = s;
        std::sort(sorted.rbegin(), sorted.rend());
        worst = std::max({worst, std::abs(t.alpha - sorted[0]), std::abs(t.beta - sorted[1]),
                          std::abs(t.gamma - sorted[2])});
        SpectralType back = solve_nu(s[1], s[2]);
        SpectralType inv = from_langlands({s[0], s[1], s[2]});
        worst = std::max({worst, std::abs(back.nu1 - nu.nu1), std::abs(back.nu2 - nu.nu2),
                          std::abs(inv.nu1 - nu.nu1), std::abs(inv.nu2 - nu.nu2)});
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("make_triple keeps ties stable") {
    auto t = make_triple(1, 1, -2);
    CHECK(t.alpha == 1);
    CHECK(t.beta == 1);
    CHECK(t.gamma == -2);
}

TEST_CASE("dual") {
    auto z = dual({0, 0, 0});
    CHECK(z.alpha == 0);
    CHECK(z.gamma == 0);
    auto d = dual({3, 1, -4});
    CHECK(d.alpha == 4);
    CHECK(d.beta == -1);
    CHECK(d.gamma == -3);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        auto t = random_triple(rng, 50, false);
        auto dd = dual(dual(t));
        CHECK(dd.alpha == t.alpha);
        CHECK(dd.beta == t.beta);
        CHECK(dd.gamma == t.gamma);
        CHECK(dual(t).valid());
    }
}

TEST_CASE("conductors") {
    CHECK(conductor_q({0, 0, 0}, 2) == 27);
    CHECK(conductor_q({2, 0, -2}, 0) == 3 * 1 * 3);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> z(-100, 100);
    for (int i = 0; i < 50; ++i) {
        auto t = random_triple(rng, 40, false);
        double tt = z(rng);
        CHECK(conductor_q2(t, tt, 0) == doctest::Approx(std::pow(conductor_q(t, tt), 2)).epsilon(1e-14));
        CHECK(conductor_q(dual(t), -tt) == doctest::Approx(conductor_q(t, tt)).epsilon(1e-14));
    }
}

TEST_CASE("wf_exponent examples") {
    CHECK(wf_exponent_xy({2, 0, -2}, 1, -1, WfMode::table) == 0);
    CHECK(wf_exponent_xy({2, 0, -2}, 1, -1, WfMode::closed) == 0);
    CHECK(wf_exponent_xy({100, 20, -120}, 110, 50, WfMode::table) == 80);
    CHECK(wf_exponent_xy({100, 20, -120}, 110, 50, WfMode::closed) == 80);
    CHECK_THROWS_AS(wf_exponent({3, -1, -2}, 0, 0, WfMode::closed), HypothesisViolated);
}

TEST_CASE("wf_exponent closed and table modes agree, and are nonnegative") {
    std::mt19937_64 rng(17);
    double worst = 0, minimum = 1e300;
    for (int k = 0; k < 20; ++k) {
        auto t = random_triple(rng, 60, true);
        double T = t.T();
        for (int i = 0; i < 200; ++i)
            for (int j = 0; j < 200; ++j) {
                double X = -2 * T + 4 * T * i / 199, Y = -2 * T + 4 * T * j / 199;
                double c = wf_exponent_xy(t, X, Y, WfMode::closed);
                worst = std::max(worst, std::abs(c - wf_exponent_xy(t, X, Y, WfMode::table)));
                minimum = std::min(minimum, c);
            }
    }
    CHECK(worst <= 1e-9);
    CHECK(minimum >= -1e-9);
    // minimum 0 is attained, e.g. on the center cell
    CHECK(wf_exponent_xy({7, 2, -9}, 4, -3, WfMode::closed) == doctest::Approx(0.0));
}

TEST_CASE("partition covers the lattice and matches the conductor") {
    for (LanglandsTriple t : {LanglandsTriple{100, 20, -120}, LanglandsTriple{60, 5, -65}, LanglandsTriple{40, 30, -70},
                              LanglandsTriple{300, 40, -340}}) {
        auto boxes = enumerate_partition(t);
        REQUIRE(!boxes.empty());
        int missed = 0;
        for (int X = int(std::ceil(t.beta + 1)); X <= int(std::floor(t.alpha - 1)); ++X)
            for (int Y = int(std::ceil(t.gamma + 1)); Y <= int(std::floor(t.beta - 1)); ++Y)
                missed += std::none_of(boxes.begin(), boxes.end(), [&](const ConductorBox& b) { return b.contains(X, Y); });
        CHECK(missed == 0);
        double worst = 1;
        for (const auto& b : boxes) {
            CHECK(b.u_width >= 1);
            CHECK(b.v_width >= 1);
            CHECK(b.x1 >= t.beta + b.u_width - 1e-9);
            CHECK(b.y1 >= t.gamma);
            CHECK(b.q_value > 0);
            for (double X : {b.x1, b.x1 + b.u_width})
                for (double Y : {b.y1, b.y1 + b.v_width}) {
                    double r = b.q_value / conductor_q(t, X) / conductor_q(t, Y);
                    worst = std::max({worst, r, 1 / r});
                }
        }
        CHECK(worst <= partition_tolerance(t));
        double L = std::log(t.T());
        MESSAGE("T=" << t.T() << " boxes=" << boxes.size() << " C=" << boxes.size() / (L * L)
                     << " worst q ratio=" << worst);
        // four boxes per (U, V) ladder pair, each ladder about log2 T long
        CHECK(boxes.size() == 4 * dyadic_ladder((t.alpha - t.beta) / 4).size() * dyadic_ladder((t.beta - t.gamma) / 4).size());
        CHECK(boxes.size() <= 4 / (std::log(2.0) * std::log(2.0)) * L * L);
    }
}

TEST_CASE("thickened partition") {
    LanglandsTriple t{100, 20, -120};
    PartitionOptions opt;
    opt.thicken_edges = true;
    auto boxes = enumerate_partition(t, opt);
    auto plain = enumerate_partition(t);
    REQUIRE(boxes.size() == plain.size());
    double worst = 1;
    for (size_t i = 0; i < boxes.size(); ++i) {
        const auto& b = boxes[i];
        CHECK(b.u_width > plain[i].u_width);
        for (double X : {b.x1, b.x1 + b.u_width})
            for (double Y : {b.y1, b.y1 + b.v_width}) {
                double r = b.q_value / conductor_q(t, X) / conductor_q(t, Y);
                worst = std::max({worst, r, 1 / r});
            }
    }
    CHECK(worst <= partition_tolerance(t, opt));
}

TEST_CASE("degenerate ranges and hypothesis") {
    CHECK(enumerate_partition({3, 1, -4}).empty());
    CHECK(enumerate_families({3, 1, -4}).empty());
    CHECK_THROWS_AS(enumerate_partition({4, -1, -3}), HypothesisViolated);
    CHECK_THROWS_AS(enumerate_families({4, -1, -3}), HypothesisViolated);
}

TEST_CASE("family row 1a") {
    LanglandsTriple t{100, 20, -120};
    auto fams = families_for(t, 10, 5);
    int found = 0, signs = 0;
    for (const auto& f : fams)
        if (f.case_label == "1a") {
            ++found;
            signs += f.sign;
            CHECK(f.t0 == 20);
            CHECK(f.r == 5);
            CHECK(f.table_d == 10);
            CHECK(f.table_s == 10);
            // endpoint arithmetic: spectral window [15, 30] for 2 tau
            CHECK(f.d == 7.5);
            CHECK(f.s == 7.5);
        }
    CHECK(found == 2);
    CHECK(signs == 0);
}

TEST_CASE("family invariants") {
    for (LanglandsTriple t : {LanglandsTriple{100, 20, -120}, LanglandsTriple{300, 40, -340}, LanglandsTriple{80, 0, -80},
                              LanglandsTriple{90, 45, -135}}) {
        auto fams = enumerate_families(t);
        REQUIRE(!fams.empty());
        double T = t.T();
        for (const auto& f : fams) {
            CHECK(1 <= f.r);
            CHECK(f.r <= f.d);
            CHECK(f.d <= f.s);
            CHECK(f.s <= kFamilyScaleConstant * T);
            CHECK((f.t0 == t.alpha || f.t0 == t.beta || f.t0 == t.gamma));
            CHECK((f.sign == 1 || f.sign == -1));
            if (f.t0 == t.gamma) {
                CHECK(f.s >= T / 8);
                CHECK(f.s <= 8 * T);
            }
        }
        auto fit = fit_family_constants(t, fams);
        MESSAGE("T=" << T << " tuples/log^2T=" << fit.count_over_log2T << " S ratio [" << fit.min_s_ratio << ", "
                     << fit.max_s_ratio << "] Q ratio [" << fit.min_q_ratio << ", " << fit.max_q_ratio << "]");
        CHECK(fit.min_q_ratio > 0);
    }
}
