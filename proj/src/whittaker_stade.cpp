#include "gl3lab/whittaker_stade.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "gl3lab/errors.hpp"

namespace gl3lab {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

template <class F>
void parallel_rows(int n, F&& body) {
    int nt = static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency())));
    if (n < 16) nt = 1;
    std::vector<std::thread> pool;
    for (int k = 0; k < nt; ++k)
        pool.emplace_back([&, k] {
            for (int i = k; i < n; i += nt) body(i);
        });
    for (auto& th : pool) th.join();
}

double mu_order(const LanglandsTriple& t) { return 0.5 * (t.alpha - t.gamma); }

// K_{i tau}(x), zero once it is below double range anyway
double k_or_zero(double tau, double x) { return x > 760.0 ? 0.0 : bessel_k_imag(tau, x); }

// w range past which both Bessel factors are negligible for every y >= e^{logy_min}
double w_extent(double logy_min, double tau) {
    double x_needed = 46.0 + tau;
    return std::max(4.0, 2.0 * (std::log(x_needed / (2 * pi)) - logy_min) + 2.0);
}

std::vector<double> uniform_grid(double lo, double hi, double h) {
    int n = static_cast<int>(std::ceil((hi - lo) / h));
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = lo + i * h;
    return g;
}

// W^S on the tensor grid (e^{ly1[i]}, e^{ly2[j]}), row-major in i.
std::vector<cplx> stade_on_grid(const LanglandsTriple& t, const std::vector<double>& ly1,
                                const std::vector<double>& ly2, double h_w, double w_max) {
    const double tau = mu_order(t), beta = t.beta;
    int nw = static_cast<int>(std::ceil(w_max / h_w));
    std::vector<double> w(2 * nw + 1);
    for (int k = -nw; k <= nw; ++k) w[k + nw] = k * h_w;
    const size_t W = w.size(), n1 = ly1.size(), n2 = ly2.size();

    std::vector<double> a_re(n1 * W), a_im(n1 * W), k2(n2 * W);
    parallel_rows(static_cast<int>(n1), [&](int i) {
        double y = std::exp(ly1[i]);
        for (size_t k = 0; k < W; ++k) {
            double kv = k_or_zero(tau, 2 * pi * y * std::sqrt(1 + std::exp(w[k])));
            double ph = 0.75 * beta * w[k];
            a_re[i * W + k] = kv * std::cos(ph) * h_w;
            a_im[i * W + k] = kv * std::sin(ph) * h_w;
        }
    });
    parallel_rows(static_cast<int>(n2), [&](int j) {
        double y = std::exp(ly2[j]);
        for (size_t k = 0; k < W; ++k) k2[j * W + k] = k_or_zero(tau, 2 * pi * y * std::sqrt(1 + std::exp(-w[k])));
    });

    std::vector<cplx> out(n1 * n2);
    parallel_rows(static_cast<int>(n1), [&](int i) {
        const double* ar = &a_re[i * W];
        const double* ai = &a_im[i * W];
        for (size_t j = 0; j < n2; ++j) {
            const double* b = &k2[j * W];
            double sr = 0.0, si = 0.0;
            for (size_t k = 0; k < W; ++k) {
                sr += ar[k] * b[k];
                si += ai[k] * b[k];
            }
            cplx pre = 8.0 * std::exp((1.0 + 0.5 * I * beta) * ly1[i] + (1.0 - 0.5 * I * beta) * ly2[j]);
            out[i * n2 + j] = pre * cplx(sr, si);
        }
    });
    return out;
}

void check_verify_range(const LanglandsTriple& t, const StadeGridSpec& spec) {
    if (!t.valid(1e-9)) throw HypothesisViolated("invalid Langlands triple");
    if (t.T() > spec.max_T) throw HypothesisViolated("T exceeds the configured verification limit");
    if (!(spec.h_logy > 0) || !(spec.h_w > 0) || !(spec.tail_tol > 0)) throw UsageError("bad grid spec");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

cplx wj_stade(const WhittakerPoint& p, const LanglandsTriple& t) {
    if (!(p.y1 > 0) || !(p.y2 > 0)) throw NonPositiveArgument("Whittaker point needs y1, y2 > 0");
    const double tau = mu_order(t), beta = t.beta;
    // Trapezoid in w = log u; the integrand is analytic in a strip and
    // doubly exponentially small at both ends.
    const double h = 0.04;
    double wr = 2.0 * (std::log((46.0 + tau) / (2 * pi * p.y1))) + 2.0;
    double wl = -(2.0 * (std::log((46.0 + tau) / (2 * pi * p.y2))) + 2.0);
    wr = std::max(wr, 4.0);
    wl = std::min(wl, -4.0);
    int kl = static_cast<int>(std::floor(wl / h)), kr = static_cast<int>(std::ceil(wr / h));
    CompensatedSum<cplx> acc;
    for (int k = kl; k <= kr; ++k) {
        double w = k * h;
        double v = k_or_zero(tau, 2 * pi * p.y1 * std::sqrt(1 + std::exp(w))) *
                   k_or_zero(tau, 2 * pi * p.y2 * std::sqrt(1 + std::exp(-w)));
        acc.add(v * std::polar(1.0, 0.75 * beta * w));
    }
    cplx pre = 8.0 * std::exp((1.0 + 0.5 * I * beta) * std::log(p.y1) + (1.0 - 0.5 * I * beta) * std::log(p.y2));
    return pre * h * acc.value();
}

GammaFactorValue star_factor(const LanglandsTriple& t) {
    SpectralType nu = from_langlands(t);
    cplx a = 3.0 * nu.nu1, b = 3.0 * nu.nu2;
    cplx lg = (0.5 - a - b) * std::log(pi) + log_gamma(a / 2.0) + log_gamma(b / 2.0) + log_gamma((a + b - 1.0) / 2.0);
    return LogValue::from_log(lg);
}

NormalizedValue normalize(cplx w, WhittakerNorm from, WhittakerNorm to, const LanglandsTriple& t, double c) {
    // Walk stade -> star -> goldfeld_J or back, tracking whose function the value is.
    auto rank = [](WhittakerNorm n) { return n == WhittakerNorm::stade ? 0 : n == WhittakerNorm::star ? 1 : 2; };
    int r = rank(from), target = rank(to);
    NormalizedValue v{w, t};
    while (r < target) {
        if (r == 0) v = {v.value / c, dual(v.triple)};
        else v.value /= star_factor(v.triple).to_complex();
        ++r;
    }
    while (r > target) {
        if (r == 1) v = {v.value * c, dual(v.triple)};
        else v.value *= star_factor(v.triple).to_complex();
        --r;
    }
    return v;
}

GammaFactorValue g_tau_closed(cplx s, double tau, const LanglandsTriple& t) {
    const double a = t.alpha, b = t.beta, g = t.gamma;
    cplx num = -3.0 * s * std::log(pi);
    for (double sg : {-1.0, 1.0})
        for (double x : {a, b, g}) num += log_gamma((s + sg * I * tau - I * x) / 2.0);
    cplx den = (-1.5 + I * a - I * g) * std::log(pi) + log_gamma((1.0 + I * g - I * b) / 2.0) +
               log_gamma((1.0 + I * b - I * a) / 2.0) + log_gamma((1.0 + I * g - I * a) / 2.0);
    return LogValue::from_log(num - den);
}

StadeReport verify_stade_gl3gl2(double s, double tau, const LanglandsTriple& t, const StadeGridSpec& spec, double c) {
    check_verify_range(t, spec);
    if (s < 1.0) throw HypothesisViolated("verify_stade_gl3gl2 needs s >= 1");
    if (std::abs(tau) > 5.0) throw HypothesisViolated("verify_stade_gl3gl2 needs |tau| <= 5");
    auto t0 = std::chrono::steady_clock::now();
    StadeReport rep;
    // integrand envelope in log variables ~ y1^{2s} y2^{s} near zero
    double lt = std::log(spec.tail_tol);
    rep.logy_min1 = lt / (2 * s) - 2.0;
    rep.logy_min2 = lt / s - 2.0;
    rep.logy_max = std::log((-lt + mu_order(t) + std::abs(tau)) / (2 * pi) + 1.0);
    rep.w_max = w_extent(std::min(rep.logy_min1, rep.logy_min2), mu_order(t));
    auto ly1 = uniform_grid(rep.logy_min1, rep.logy_max, spec.h_logy);
    auto ly2 = uniform_grid(rep.logy_min2, rep.logy_max, spec.h_logy);

    // W_J(nu) = W^*(nu) / factor(nu) and W^*(y, nu) = W^S(y, swapped nu) / c
    auto ws = stade_on_grid(dual(t), ly1, ly2, spec.h_w, rep.w_max);
    cplx factor = star_factor(t).to_complex();
    CompensatedSum<cplx> acc;
    for (size_t j = 0; j < ly2.size(); ++j) {
        double y2 = std::exp(ly2[j]);
        double kj = k_or_zero(tau, 2 * pi * y2) * std::pow(y2, s - 1.0);
        if (kj == 0.0) continue;
        for (size_t i = 0; i < ly1.size(); ++i)
            acc.add(ws[i * ly2.size() + j] * (kj * std::exp((2 * s - 1.0) * ly1[i])));
    }
    rep.lhs = 4.0 * acc.value() * spec.h_logy * spec.h_logy / (c * factor);
    rep.rhs = g_tau_closed(s, tau, t).to_complex();
    rep.rel_err = std::abs(rep.lhs - rep.rhs) / std::abs(rep.rhs);
    rep.implied_c = std::abs(c * rep.lhs / rep.rhs);
    rep.nodes = static_cast<int>(ly1.size() * ly2.size());
    rep.runtime_s = seconds_since(t0);
    return rep;
}

StadeReport verify_stade_gl3gl3(double s, const LanglandsTriple& t, const StadeGridSpec& spec) {
    check_verify_range(t, spec);
    if (s < 1.0) throw HypothesisViolated("verify_stade_gl3gl3 needs s >= 1");
    auto t0 = std::chrono::steady_clock::now();
    StadeReport rep;
    double lt = std::log(spec.tail_tol);
    rep.logy_min1 = lt / (2 * s) - 2.0;
    rep.logy_min2 = lt / s - 2.0;
    // |W|^2 decays like e^{-4 pi y}
    rep.logy_max = std::log((-lt + 2 * mu_order(t)) / (4 * pi) + 1.0);
    rep.w_max = w_extent(std::min(rep.logy_min1, rep.logy_min2), mu_order(t));
    auto ly1 = uniform_grid(rep.logy_min1, rep.logy_max, spec.h_logy);
    auto ly2 = uniform_grid(rep.logy_min2, rep.logy_max, spec.h_logy);
    auto ws = stade_on_grid(t, ly1, ly2, spec.h_w, rep.w_max);
    CompensatedSum<double> acc;
    for (size_t i = 0; i < ly1.size(); ++i)
        for (size_t j = 0; j < ly2.size(); ++j)
            acc.add(std::norm(ws[i * ly2.size() + j]) * std::exp((2 * s - 2) * ly1[i] + (s - 2) * ly2[j]));
    double lhs_log = -1.5 * s * std::log(pi) + log_gamma(1.5 * s) +
                     std::log(acc.value() * spec.h_logy * spec.h_logy);
    const double a[3] = {t.alpha, t.beta, t.gamma};
    cplx rhs_log = -4.5 * s * std::log(pi);
    for (double x : a)
        for (double y : a) rhs_log += log_gamma((s + I * x - I * y) / 2.0);
    rep.lhs = std::exp(lhs_log);
    rep.rhs = std::exp(rhs_log);
    rep.rel_err = std::abs(std::exp(lhs_log - rhs_log) - 1.0);
    rep.nodes = static_cast<int>(ly1.size() * ly2.size());
    rep.runtime_s = seconds_since(t0);
    return rep;
}

double landau_ratio(const LanglandsTriple& t) {
    const double a = t.alpha, b = t.beta, g = t.gamma;
    SpectralType nu = from_langlands(t);
    cplx n1 = 3.0 * nu.nu1, n2 = 3.0 * nu.nu2;
    double num = log_gamma(cplx(0.5, 0.5 * (a - b))).real() + log_gamma(cplx(0.5, 0.5 * (a - g))).real() +
                 log_gamma(cplx(0.5, 0.5 * (b - g))).real();
    double den = log_gamma(n1 / 2.0).real() + log_gamma(n2 / 2.0).real() + log_gamma((n1 + n2 - 1.0) / 2.0).real();
    return std::exp(2.0 * (num - den));
}

GsizeFit fit_gsize_constant(const LanglandsTriple& t, double span, int n) {
    if (n < 2) throw UsageError("need at least two grid points");
    GsizeFit fit;
    fit.c_upper = -std::numeric_limits<double>::infinity();
    fit.c_lower = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double tt = -span + 2 * span * i / (n - 1);
            double tau = -span + 2 * span * j / (n - 1);
            LogValue g = g_tau_closed(cplx(0.5, tt), tau, t);
            // log cosh(pi tau) without overflow
            double lc = pi * std::abs(tau) + std::log1p(std::exp(-2 * pi * std::abs(tau))) - std::log(2.0);
            double v = lc + 2 * g.log_magnitude + 0.5 * pi * wf_exponent(t, tt, tau, WfMode::closed) +
                       0.5 * std::log(conductor_q2(t, tt, tau));
            fit.c_upper = std::max(fit.c_upper, v);
            fit.c_lower = std::min(fit.c_lower, v);
            ++fit.points;
        }
    return fit;
}

}  // namespace gl3lab
