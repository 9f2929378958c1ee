#pragma once

#include <complex>
#include <vector>

#include "gl3lab/special_functions.hpp"
#include "gl3lab/spectral_params.hpp"

namespace gl3lab {

struct WhittakerPoint {
    double y1 = 1.0;
    double y2 = 1.0;
};

using GammaFactorValue = LogValue;

// Stade's normalization:
//   W^S(y) = 8 y1^{1+i beta/2} y2^{1-i beta/2} int_0^inf K_mu(2 pi y1 sqrt(1+u))
//            K_mu(2 pi y2 sqrt(1+1/u)) u^{3 i beta/4} du/u,   mu = (i gamma - i alpha)/2.
// Complex in general; real when beta = 0.
cplx wj_stade(const WhittakerPoint& p, const LanglandsTriple& t);

enum class WhittakerNorm { stade, star, goldfeld_J };

// Constant c in W^S(y, (nu1, nu2)) = c W^*(y, (nu2, nu1)). The value 1 is the
// one for which the integral and closed forms of G_tau agree; see
// verify_stade_gl3gl2, which also reports the c implied by the quadrature.
inline constexpr double kStadeStarConstant = 1.0;

struct NormalizedValue {
    cplx value;
    LanglandsTriple triple;  // the form whose Whittaker function `value` belongs to
};

// pi^{1/2 - 3nu1 - 3nu2} Gamma(3nu1/2) Gamma(3nu2/2) Gamma((3nu1 + 3nu2 - 1)/2), W^* = factor * W_J.
GammaFactorValue star_factor(const LanglandsTriple& t);

// Converts a Whittaker value at a fixed y. Stade values for a triple t map to
// star values for dual(t) (the (nu1, nu2) swap); star and goldfeld_J share the triple.
NormalizedValue normalize(cplx w, WhittakerNorm from, WhittakerNorm to, const LanglandsTriple& t,
                          double c = kStadeStarConstant);

GammaFactorValue g_tau_closed(cplx s, double tau, const LanglandsTriple& t);

struct StadeGridSpec {
    double h_logy = 0.16;
    double h_w = 0.16;
    double tail_tol = 1e-13;  // truncation where the integrand envelope drops below this
    double max_T = 10.0;
};

struct StadeReport {
    cplx lhs;
    cplx rhs;
    double rel_err = 0.0;
    double implied_c = 0.0;  // gl3 x gl2 only: c * lhs / rhs
    double runtime_s = 0.0;
    double logy_min1 = 0.0, logy_min2 = 0.0, logy_max = 0.0, w_max = 0.0;
    int nodes = 0;
};

// Quadrature of 4 int int K_{i tau}(2 pi y2) W_J(y) (y1^2 y2)^{s-1/2} y2^{1/2} dy2/y2^2 dy1/y1
// against g_tau_closed. Requires s >= 1, T <= spec.max_T, |tau| <= 5.
StadeReport verify_stade_gl3gl2(double s, double tau, const LanglandsTriple& t, const StadeGridSpec& spec = {},
                                double c = kStadeStarConstant);

// pi^{-3s/2} Gamma(3s/2) int int |W^S(y)|^2 (y1^2 y2)^s dy/(y1^3 y2^3) against
// pi^{-9s/2} prod_{j,j'} Gamma((s + i a_j - i a_j')/2).
StadeReport verify_stade_gl3gl3(double s, const LanglandsTriple& t, const StadeGridSpec& spec = {});

double landau_ratio(const LanglandsTriple& t);

// Largest value of log(cosh(pi tau) |G_tau(1/2 + it)|^2) + (pi/2) W_F + (1/2) log q_F
// over the grid t, tau in [-span, span]; also the smallest, to exhibit the two-sided size.
struct GsizeFit {
    double c_upper = 0.0;
    double c_lower = 0.0;
    int points = 0;
};
GsizeFit fit_gsize_constant(const LanglandsTriple& t, double span, int n);

}  // namespace gl3lab
