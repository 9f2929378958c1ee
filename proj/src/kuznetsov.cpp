#include "gl3lab/kuznetsov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gl3lab/errors.hpp"
#include "gl3lab/quadrature.hpp"

namespace gl3lab {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

// log P(r) for real r
double log_p_real(double r, const SpectralWeight& w) {
    double s = 0.0;
    const double r2 = r * r, S2 = w.S * w.S;
    for (int k = 1; k <= w.factors(); ++k) {
        double c = k - 0.5;
        s += std::log((r2 + c * c) / S2);
    }
    return s;
}

struct Window {
    double log_peak = 0.0;
    double lo = 0.0, hi = 0.0;  // rho = (r - S)/D range where the weight is within e^{-46} of its peak
};

Window weight_window(const SpectralWeight& w) {
    auto f = [&](double rho) { return log_p_real(w.S + w.D * rho, w) - rho * rho; };
    const double lo0 = -w.S / w.D, hi0 = 2 * w.D + 20;
    const double step = 1.0 / 256;
    double best = -std::numeric_limits<double>::infinity(), arg = 0.0;
    for (double rho = lo0; rho <= hi0; rho += step) {
        double v = f(rho);
        if (v > best) best = v, arg = rho;
    }
    Window win;
    win.log_peak = best;
    win.lo = arg;
    while (win.lo > lo0 && f(win.lo) > best - 46) win.lo = std::max(lo0, win.lo - 0.25);
    win.hi = arg;
    while (f(win.hi) > best - 46) win.hi += 0.25;
    return win;
}

cplx h_scaled(double r, long m, long n, const SpectralWeight& w, double scale) {
    r = std::max(std::abs(r), 1e-6);
    const double L = std::log(static_cast<double>(m) / n);
    const double lp = log_p_real(r, w) - scale;
    const double ep = -std::pow((r - w.S) / w.D, 2), em = -std::pow((r + w.S) / w.D, 2);
    const double q = std::exp(-2 * pi * r);
    const double den = -std::expm1(-2 * pi * r);
    cplx pref = 2.0 * std::exp(I * r * L) * (1.0 - q * std::exp(-2.0 * I * r * L)) / (den * den);
    return pref * (std::exp(lp + ep) - std::exp(lp - 2 * pi * r + em));
}

double default_kernel(double r, double x) { return bessel_j_kernel(r, x); }

}  // namespace

void SpectralWeight::validate() const {
    if (!(D > 0) || !(S > D)) throw HypothesisViolated("spectral weight needs S > D > 0");
    if (degree < 2 || degree % 2) throw HypothesisViolated("spectral weight degree must be a positive even number");
}

cplx ScaledValue::to_complex() const { return value * std::exp(log_scale); }

LogValue p_poly(cplx r, const SpectralWeight& w) {
    cplx s = 0.0;
    const cplx r2 = r * r;
    const double S2 = w.S * w.S;
    for (int k = 1; k <= w.factors(); ++k) {
        double c = k - 0.5;
        cplx f = (r2 + c * c) / S2;
        if (f == cplx(0.0)) return LogValue::zero();
        s += std::log(f);
    }
    return LogValue::from_log(s);
}

double weight_log_peak(const SpectralWeight& w) {
    w.validate();
    return weight_window(w).log_peak;
}

ScaledValue h_weight(double r, long m, long n, const SpectralWeight& w) {
    if (m < 1 || n < 1) throw ZeroIndex("h_weight needs m, n >= 1");
    w.validate();
    const double scale = weight_window(w).log_peak;
    return {h_scaled(r, m, n, w, scale), scale, 0.0};
}

double h_correction(double r, long m, long n, const SpectralWeight& w) {
    if (!(r > 0)) throw NonPositiveArgument("h_correction needs r > 0");
    const double L = std::log(static_cast<double>(m) / n);
    const double q = std::exp(-2 * pi * r);
    const cplx z = std::exp(-2.0 * I * r * L);
    const double eps = std::exp(-4 * r * w.S / (w.D * w.D));
    return std::abs(2.0 - z - eps + q * (z * eps - 1.0)) / std::pow(1 - q, 2);
}

ScaledValue transform_H(double x, long m, long n, const SpectralWeight& w) {
    return transform_H(x, m, n, w, default_kernel);
}

ScaledValue transform_H(double x, long m, long n, const SpectralWeight& w, const BesselKernel& kernel) {
    if (!(x > 0)) throw NonPositiveArgument("transform_H needs x > 0");
    w.validate();
    Window win = weight_window(w);
    const double a = std::max(1e-6, w.S + w.D * win.lo), b = w.S + w.D * win.hi;
    const double L = std::log(static_cast<double>(m) / n);
    const double freq = 4 + std::abs(L) + 2 * std::abs(std::log(x / (a + b)));
    const int panels = static_cast<int>(std::ceil((b - a) * (1 + freq / pi)));
    auto f = [&](double r) { return r * h_scaled(r, m, n, w, win.log_peak) * kernel(r, x); };
    cplx coarse = gauss_panels<cplx>(f, a, b, panels);
    cplx fine = gauss_panels<cplx>(f, a, b, 2 * panels);
    return {-(2 / pi) * fine, win.log_peak, (2 / pi) * std::abs(fine - coarse)};
}

ScaledValue diagonal_H0(long m, long n, const SpectralWeight& w) {
    w.validate();
    Window win = weight_window(w);
    const double a = std::max(1e-6, w.S + w.D * win.lo), b = w.S + w.D * win.hi;
    const double L = std::log(static_cast<double>(m) / n);
    const int panels = static_cast<int>(std::ceil((b - a) * (1 + std::abs(L))));
    auto f = [&](double r) { return r * std::tanh(pi * r) * h_scaled(r, m, n, w, win.log_peak); };
    cplx coarse = gauss_panels<cplx>(f, a, b, panels);
    cplx fine = gauss_panels<cplx>(f, a, b, 2 * panels);
    return {2 / (pi * pi) * fine, win.log_peak, 2 / (pi * pi) * std::abs(fine - coarse)};
}

KTransform::KTransform(const SpectralWeight& w) : w_(w) {
    w.validate();
    Window win = weight_window(w);
    log_scale_ = win.log_peak;
    lo_ = win.lo;
    hi_ = win.hi;
    const GaussRule& g = gauss_legendre_rule(20);
    const int panels = static_cast<int>(std::ceil((hi_ - lo_) * 4));
    const double hw = (hi_ - lo_) / panels / 2;
    for (int p = 0; p < panels; ++p) {
        double mid = lo_ + (2 * p + 1) * hw;
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            double rho = mid + hw * g.nodes[i];
            nodes_.push_back(rho);
            weights_.push_back(hw * g.weights[i] * k(rho));
        }
    }
    double peak = 0.0;
    for (double v = 0.0; v <= 40.0; v += 0.125) {
        double a = std::abs(hat(-v / pi));
        peak = std::max(peak, a);
        v_cut_ = v;
        if (v > 1.0 && a < 1e-14 * peak) break;
    }
}

double KTransform::k(double rho) const {
    if (rho < -w_.S / w_.D) return 0.0;
    double e = log_p_real(w_.S + w_.D * rho, w_) - rho * rho - log_scale_;
    return 4 / (pi * pi) * (1 + w_.D * rho / w_.S) * std::exp(e);
}

cplx KTransform::hat(double y) const {
    CompensatedSum<cplx> acc;
    for (size_t i = 0; i < nodes_.size(); ++i) acc.add(weights_[i] * std::exp(-2 * pi * I * nodes_[i] * y));
    return acc.value();
}

ScaledValue transform_H_pm(long c, long m, long n, const SpectralWeight& w, int sign, double v_cutoff) {
    return transform_H_pm(KTransform(w), c, m, n, w, sign, v_cutoff);
}

ScaledValue transform_H_pm(const KTransform& kt, long c, long m, long n, const SpectralWeight& w, int sign,
                           double v_cutoff) {
    if (c < 1) throw NonPositiveModulus("transform_H_pm needs c >= 1");
    if (m < 1 || n < 1) throw ZeroIndex("transform_H_pm needs m, n >= 1");
    if (sign != 1 && sign != -1) throw UsageError("sign must be +1 or -1");
    const double V = v_cutoff > 0 ? v_cutoff : kt.v_cutoff();
    const double s = sign;
    auto f = [&](double v) {
        double phase = 2 * w.S * v / w.D + s * 2 * pi * (m * std::exp(-v / w.D) + n * std::exp(v / w.D)) / c;
        return kt.hat(-v / pi) * std::polar(1.0, phase);
    };
    const double freq = 2 * w.S / w.D + 2 * std::max(std::abs(kt.rho_lo()), std::abs(kt.rho_hi())) +
                        2 * pi * (m + n) * std::exp(V / w.D) / (c * w.D);
    const int panels = static_cast<int>(std::ceil(2 * V * (1 + freq / 3)));
    cplx coarse = gauss_panels<cplx>(f, -V, V, panels);
    cplx fine = gauss_panels<cplx>(f, -V, V, 2 * panels);
    return {w.S * fine, kt.log_scale(), w.S * std::abs(fine - coarse)};
}

double khat_decay_constant(const SpectralWeight& w, double y_max) {
    KTransform kt(w);
    double c = 0.0;
    for (double y = 0.0; y <= y_max; y += 1.0 / 16) c = std::max(c, std::abs(kt.hat(y)) * std::pow(1 + y, 6));
    return c;
}

KmnReport verify_kmncalc(long m, long n, long c, const SpectralWeight& w, double R) {
    if (m < 1 || n < 1) throw ZeroIndex("verify_kmncalc needs m, n >= 1");
    if (c < 1) throw NonPositiveModulus("verify_kmncalc needs c >= 1");
    w.validate();
    if (!(R > 0) || std::abs(m - n) / static_cast<double>(m) > 1 / R)
        throw HypothesisViolated("|m - n| / m must be at most 1/R");
    if (w.S / w.D < 2) throw HypothesisViolated("verify_kmncalc needs S/D >= 2");
    KmnReport rep;
    rep.x = 4 * pi * std::sqrt(static_cast<double>(m) * n) / c;
    ScaledValue H = transform_H(rep.x, m, n, w);
    KTransform kt(w);
    ScaledValue hp = transform_H_pm(kt, c, m, n, w, +1);
    ScaledValue hm = transform_H_pm(kt, c, m, n, w, -1);
    rep.H = H.value;
    rep.H_plus = hp.value;
    rep.H_minus = hm.value;
    rep.log_scale = H.log_scale;
    rep.v_cutoff = kt.v_cutoff();
    rep.abs_err = std::abs(H.value - hp.value - hm.value);
    rep.rel_err = std::abs(H.value) > 0 ? rep.abs_err / std::abs(H.value) : rep.abs_err;
    rep.quadrature_err = H.error + hp.error + hm.error;
    if (m == n) rep.H0_constant = std::abs(diagonal_H0(m, n, w).value) / (w.S * w.D);
    return rep;
}

}  // namespace gl3lab
