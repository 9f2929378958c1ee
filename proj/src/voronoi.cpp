#include "gl3lab/voronoi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "gl3lab/errors.hpp"
#include "gl3lab/quadrature.hpp"
#include "gl3lab/special_functions.hpp"

namespace gl3lab {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
constexpr int kJet = 5;
// transforms below this fraction of their peak are quadrature roundoff
constexpr double kFloor = 1e-15;

// truncated Taylor series in a small increment
struct Jet {
    std::array<double, kJet> c{};
};

Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i < kJet; ++i)
        for (int j = 0; i + j < kJet; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

Jet affine(const Jet& a, double scale, double shift) {
    Jet r;
    for (int i = 0; i < kJet; ++i) r.c[i] = scale * a.c[i];
    r.c[0] += shift;
    return r;
}

Jet reciprocal(const Jet& a) {
    Jet r;
    r.c[0] = 1.0 / a.c[0];
    for (int k = 1; k < kJet; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += a.c[j] * r.c[k - j];
        r.c[k] = -s / a.c[0];
    }
    return r;
}

Jet exp_jet(const Jet& a) {
    Jet r;
    r.c[0] = std::exp(a.c[0]);
    for (int k = 1; k < kJet; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * a.c[j] * r.c[k - j];
        r.c[k] = s / k;
    }
    return r;
}

struct LogFrame {
    double mid = 0.0, half = 0.0;  // u = mid + half v
};

LogFrame frame(const TestFunctionPsi& psi) {
    double a = std::log(psi.x_lo), b = std::log(psi.x_hi);
    return {(a + b) / 2, (b - a) / 2};
}

double shape(const TestFunctionPsi& psi, double v) {
    if (std::abs(v) >= 1) return 0.0;
    double w = 1 - v * v;
    return psi.amplitude * std::exp(1 - 1 / w - psi.envelope * psi.envelope * v * v / 2);
}

// Gauss nodes in u = log x carrying du * psi(e^u), dense enough for x^{it} with |t| <= freq
struct LogNodes {
    std::vector<double> u, w;
};

LogNodes log_nodes(const TestFunctionPsi& psi, double freq) {
    LogFrame f = frame(psi);
    const int panels = 16 + static_cast<int>(std::ceil(2 * psi.envelope + f.half * freq / 3));
    const GaussRule& g = gauss_legendre_rule(20);
    LogNodes out;
    const double hv = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = -1 + (2 * p + 1) * hv;
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            double v = mid + hv * g.nodes[i];
            double wt = hv * g.weights[i] * f.half * shape(psi, v);
            if (wt == 0.0) continue;
            out.u.push_back(f.mid + f.half * v);
            out.w.push_back(wt);
        }
    }
    return out;
}

cplx mellin_on(const LogNodes& n, cplx s) {
    CompensatedSum<cplx> acc;
    for (size_t i = 0; i < n.u.size(); ++i) acc.add(n.w[i] * std::exp(s * n.u[i]));
    return acc.value();
}

using Triple3 = std::array<double, 3>;

Triple3 as_array(const LanglandsTriple& t) { return {t.alpha, t.beta, t.gamma}; }

cplx log_ratio(cplx s, const Triple3& a, int k) {
    cplx out = 0.0;
    for (double aj : a) out += log_gamma((1.0 + s + I * aj + double(k)) / 2.0) - log_gamma((-s - I * aj + double(k)) / 2.0);
    return out;
}

// [lo, hi] around center where g stays above tol * peak; g is sampled every half unit
// and a side ends after ten units below the threshold.
std::pair<double, double> adaptive_window(const std::function<double(double)>& g, double center, double tol,
                                          double min_half = 4.0) {
    constexpr double step = 0.5;
    constexpr int quiet = 20;
    constexpr int max_steps = 40000;
    double peak = g(center);
    double ends[2] = {center, center};
    for (int side = 0; side < 2; ++side) {
        const double dir = side == 0 ? -1.0 : 1.0;
        int below = 0;
        double last_above = center;
        int i = 1;
        for (; i <= max_steps; ++i) {
            double t = center + dir * i * step;
            double v = g(t);
            peak = std::max(peak, v);
            if (v <= tol * peak) {
                if (++below >= quiet && i * step >= min_half) break;
            } else {
                below = 0;
                last_above = t;
            }
        }
        if (i > max_steps) throw ConvergenceFailure("contour integrand does not decay", 0.0, peak);
        ends[side] = last_above + dir * 2.0;
    }
    return {ends[0], ends[1]};
}

void contour_nodes(double lo, double hi, std::vector<double>& t, std::vector<double>& w) {
    const GaussRule& g = gauss_legendre_rule(20);
    const int panels = static_cast<int>(std::ceil((hi - lo) * 2));
    const double h = (hi - lo) / panels / 2;
    t.clear();
    w.clear();
    for (int p = 0; p < panels; ++p) {
        double mid = lo + (2 * p + 1) * h;
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            t.push_back(mid + h * g.nodes[i]);
            w.push_back(h * g.weights[i]);
        }
    }
}

template <class Acc>
cplx contour_sum(const std::vector<double>& t, const std::vector<cplx>& f, double L) {
    Acc re = 0, im = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        cplx z = f[i] * std::polar(1.0, -t[i] * L);
        re += z.real();
        im += z.imag();
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

cplx contour_value(const std::vector<double>& t, const std::vector<cplx>& f, double L, PrecisionMode mode) {
    if (mode == PrecisionMode::extended) return contour_sum<long double>(t, f, L);
    CompensatedSum<cplx> acc;
    for (size_t i = 0; i < t.size(); ++i) acc.add(f[i] * std::polar(1.0, -t[i] * L));
    return acc.value();
}

long divisor3(long n) {
    long out = 1;
    for (auto [p, e] : factorize(n)) out *= (e + 1) * (e + 2) / 2;
    return out;
}

// phi-tilde(-sigma - it) = M^{-sigma - i(t + T0)} int gamma(z) z^{-1/2 - sigma - i(t + T0)} e(v U z) dz / z
class PhiTilde {
public:
    PhiTilde(const EtaWeight& eta, double v, double U, double sigma, double T0)
        : eta_(eta), v_(v), U_(U), sigma_(sigma), T0_(T0) {
        rebuild(64.0);
    }

    cplx operator()(double t) {
        const double tt = t + T0_;
        if (std::abs(tt) > freq_) rebuild(1.25 * std::abs(tt) + 16);
        CompensatedSum<cplx> acc;
        for (size_t i = 0; i < nodes_.u.size(); ++i) acc.add(amp_[i] * std::polar(1.0, osc_[i] - tt * nodes_.u[i]));
        return std::exp((-sigma_ - I * tt) * std::log(eta_.M)) * acc.value();
    }

private:
    void rebuild(double freq) {
        freq_ = freq;
        nodes_ = log_nodes(eta_.gamma, freq + 2 * pi * std::abs(v_) * U_ * eta_.gamma.x_hi);
        amp_.resize(nodes_.u.size());
        osc_.resize(nodes_.u.size());
        for (size_t i = 0; i < nodes_.u.size(); ++i) {
            amp_[i] = nodes_.w[i] * std::exp((-0.5 - sigma_) * nodes_.u[i]);
            osc_[i] = 2 * pi * v_ * U_ * std::exp(nodes_.u[i]);
        }
    }

    EtaWeight eta_;
    double v_, U_, sigma_, T0_;
    double freq_ = 0.0;
    LogNodes nodes_;
    std::vector<double> amp_, osc_;
};

struct PhiTable {
    std::vector<double> t, w;
    std::vector<cplx> f;  // weight * gamma ratio * phi-tilde / 2 pi
    double sigma = 0.0;

    cplx value(double x) const {
        double L = std::log(pi * pi * pi * x);
        return std::exp(-sigma * L) * contour_value(t, f, L, PrecisionMode::binary64);
    }
};

std::pair<double, double> phi_window(PhiTilde& pt, const Triple3& a, int k, double sigma, double T0, double v,
                                     double U, const EtaWeight& eta) {
    const double z0 = std::sqrt(eta.gamma.x_lo * eta.gamma.x_hi);
    const double center = 2 * pi * v * U * z0 - T0;
    double top = 0.0;
    auto g = [&](double t) {
        double m = std::abs(pt(t));
        top = std::max(top, m);
        if (m <= kFloor * top) return 0.0;
        return std::exp(log_ratio(cplx(sigma, t), a, k).real()) * m;
    };
    return adaptive_window(g, center, 1e-13);
}

PhiTable phi_table(const Triple3& a, int k, double sigma, double T0, double v, double U, const EtaWeight& eta) {
    PhiTilde pt(eta, v, U, sigma, T0);
    auto [lo, hi] = phi_window(pt, a, k, sigma, T0, v, U, eta);
    PhiTable tab;
    tab.sigma = sigma;
    contour_nodes(lo, hi, tab.t, tab.w);
    tab.f.resize(tab.t.size());
    for (size_t i = 0; i < tab.t.size(); ++i) {
        cplx s(sigma, tab.t[i]);
        tab.f[i] = tab.w[i] / (2 * pi) * std::exp(log_ratio(s, a, k)) * pt(tab.t[i]);
    }
    return tab;
}

double standard_bump_value(double y) { return std::abs(y) >= 1 ? 0.0 : std::exp(-1.0 / (1 - y * y)); }

}  // namespace

void TestFunctionPsi::validate() const {
    if (!(x_lo > 0) || !(x_hi > x_lo)) throw DegenerateRange("psi support needs 0 < x_lo < x_hi");
    if (!(envelope >= 0)) throw UsageError("psi envelope must be nonnegative");
    if (derivative_order_available < 4) throw UsageError("psi needs at least four derivatives");
}

double TestFunctionPsi::operator()(double x) const {
    if (!(x > x_lo) || !(x < x_hi)) return 0.0;
    LogFrame f = frame(*this);
    return shape(*this, (std::log(x) - f.mid) / f.half);
}

double TestFunctionPsi::derivative(double x, int j) const {
    if (j < 0 || j > derivative_order_available || j >= kJet) throw UsageError("derivative order out of range");
    if (!(x > x_lo) || !(x < x_hi)) return 0.0;
    LogFrame f = frame(*this);
    // u(x + e) = log x + sum (-1)^{k+1} (e/x)^k / k
    Jet u;
    u.c[0] = std::log(x);
    for (int k = 1; k < kJet; ++k) u.c[k] = (k % 2 ? 1.0 : -1.0) / (k * std::pow(x, k));
    Jet v = affine(u, 1 / f.half, -f.mid / f.half);
    Jet v2 = v * v;
    Jet w = affine(v2, -1.0, 1.0);
    Jet expo = reciprocal(w);
    for (int k = 0; k < kJet; ++k) expo.c[k] = -expo.c[k] - envelope * envelope * v2.c[k] / 2;
    expo.c[0] += 1.0;
    Jet e = exp_jet(expo);
    double fact = 1.0;
    for (int k = 2; k <= j; ++k) fact *= k;
    return amplitude * e.c[j] * fact;
}

cplx mellin_psi(const TestFunctionPsi& psi, cplx s) {
    psi.validate();
    return mellin_on(log_nodes(psi, std::abs(s.imag())), s);
}

double mellin_decay_constant(const TestFunctionPsi& psi, double sigma, double t_max) {
    LogNodes n = log_nodes(psi, t_max);
    double c = 0.0;
    for (double t = 0.0; t <= t_max; t += 0.25) {
        double a = std::abs(mellin_on(n, cplx(sigma, t))) * std::pow(1 + t, 4);
        c = std::max(c, a);
    }
    return c;
}

MellinInverse mellin_inverse(const TestFunctionPsi& psi, double x, double sigma, double abs_tol) {
    psi.validate();
    if (!(x > 0)) throw NonPositiveArgument("mellin_inverse needs x > 0");
    auto g = [&](double t) { return std::abs(mellin_psi(psi, cplx(sigma, t))); };
    auto [lo, hi] = adaptive_window(g, 0.0, abs_tol * 1e-3);
    std::vector<double> t, w;
    contour_nodes(lo, hi, t, w);
    LogNodes n = log_nodes(psi, std::max(-lo, hi));
    const double L = std::log(x);
    std::vector<cplx> f(t.size());
    for (size_t i = 0; i < t.size(); ++i) f[i] = w[i] / (2 * pi) * mellin_on(n, cplx(sigma, t[i]));
    MellinInverse out;
    out.value = (std::exp(-sigma * L) * contour_value(t, f, L, PrecisionMode::binary64)).real();
    out.height = std::max(-lo, hi);
    return out;
}

void VoronoiParams::validate() const {
    if (!triple.valid(1e-9)) throw UsageError("Voronoi parameters need an ordered triple summing to zero");
    if (k != 0 && k != 1) throw UsageError("k must be 0 or 1");
    if (!(sigma > -1)) throw HypothesisViolated("contour needs sigma > -1");
    if (!(U_scale > 0)) throw HypothesisViolated("U must be positive");
}

double VoronoiParams::V() const {
    if (V_scale > 0) return V_scale;
    const double tol = 1e-9 * std::max(1.0, triple.T());
    if (std::abs(T0 - triple.gamma) <= tol) return triple.T();
    return triple.alpha - triple.beta;
}

cplx log_gamma_ratio(cplx s, const LanglandsTriple& t, int k) { return log_ratio(s, as_array(t), k); }

VoronoiTransform::VoronoiTransform(const LanglandsTriple& t, const TestFunctionPsi& psi, double sigma, double abs_tol,
                                   PrecisionMode mode)
    : sigma_(sigma), mode_(mode) {
    psi.validate();
    if (!(sigma > -1)) throw HypothesisViolated("contour needs sigma > -1");
    const Triple3 a = as_array(t);
    double top = 0.0;
    auto g = [&](double tt) {
        double m = std::abs(mellin_psi(psi, cplx(-sigma, -tt)));
        top = std::max(top, m);
        if (m <= kFloor * top) return 0.0;
        cplx s(sigma, tt);
        return m * std::max(std::exp(log_ratio(s, a, 0).real()), std::exp(log_ratio(s, a, 1).real()));
    };
    auto [lo, hi] = adaptive_window(g, 0.0, abs_tol * 1e-3);
    height_ = std::max(-lo, hi);
    contour_nodes(lo, hi, t_, w_);
    LogNodes n = log_nodes(psi, height_);
    for (int k = 0; k < 2; ++k) f_[k].resize(t_.size());
    for (size_t i = 0; i < t_.size(); ++i) {
        cplx s(sigma, t_[i]);
        cplx m = w_[i] / (2 * pi) * mellin_on(n, -s);
        for (int k = 0; k < 2; ++k) f_[k][i] = m * std::exp(log_ratio(s, a, k));
    }
}

cplx VoronoiTransform::psi_k(double x, int k) const {
    if (!(x > 0)) throw NonPositiveArgument("psi_k needs x > 0");
    if (k != 0 && k != 1) throw UsageError("k must be 0 or 1");
    const double L = std::log(pi * pi * pi * x);
    return std::exp(-sigma_ * L) * contour_value(t_, f_[k], L, mode_);
}

std::pair<cplx, cplx> VoronoiTransform::psi_pm(double x) const {
    const double norm = 1 / (2 * std::pow(pi, 1.5));
    cplx p0 = psi_k(x, 0), p1 = psi_k(x, 1);
    return {norm * (p0 - I * p1), norm * (p0 + I * p1)};
}

cplx psi_k_transform(double x, const VoronoiParams& p, const TestFunctionPsi& psi) {
    p.validate();
    return VoronoiTransform(p.triple, psi, p.sigma).psi_k(x, p.k);
}

std::pair<cplx, cplx> psi_pm(double x, const VoronoiParams& p, const TestFunctionPsi& psi) {
    p.validate();
    return VoronoiTransform(p.triple, psi, p.sigma).psi_pm(x);
}

VoronoiReport verify_voronoi(const GL3CoefficientTable& table, const TestFunctionPsi& psi, long m, long d, long c,
                             long n2_cap, PrecisionMode mode) {
    if (c < 1) throw NonPositiveModulus("verify_voronoi needs c >= 1");
    if (m < 1 || n2_cap < 1) throw ZeroIndex("verify_voronoi needs m, n2_cap >= 1");
    if (gcd(c, d) != 1) throw NonCoprime("verify_voronoi needs (c, d) = 1");
    psi.validate();
    VoronoiReport rep;
    rep.n2_cap = n2_cap;
    rep.degenerate_c1 = c == 1;
    const long dbar = c == 1 ? 0 : mod_inverse(((d % c) + c) % c, c);

    const long n_lo = static_cast<long>(std::floor(psi.x_lo)) + 1;
    const long n_hi = static_cast<long>(std::ceil(psi.x_hi)) - 1;
    if (!table.covers(m, std::max(n_hi, 1L))) throw CoverageError("table does not cover the left side");
    RootTable roots(c);
    CompensatedSum<cplx> lhs;
    for (long n = std::max(n_lo, 1L); n <= n_hi; ++n) lhs.add(table(m, n) * roots(n * dbar) * psi(static_cast<double>(n)));
    rep.lhs = lhs.value();

    VoronoiTransform vt(table.triple(), psi, -0.5, mode == PrecisionMode::extended ? 1e-12 : 1e-10, mode);
    rep.height = vt.height();
    const double c3m = static_cast<double>(c) * c * c * m;
    CompensatedSum<cplx> rhs;
    double tail = 0.0;
    for (long n1 = 1; n1 <= c * m; ++n1) {
        if ((c * m) % n1) continue;
        const long q = m * c / n1;
        if (!table.covers(n2_cap, n1)) throw CoverageError("table does not cover the dual side");
        RootTable rq(q);
        for (long n2 = 1; n2 <= n2_cap; ++n2) {
            auto [pp, pm] = vt.psi_pm(static_cast<double>(n2) * n1 * n1 / c3m);
            cplx sp = kloosterman_sum(m * d, n2, rq), sm = kloosterman_sum(m * d, -n2, rq);
            rhs.add(table(n2, n1) / static_cast<double>(n1 * n2) * (sp * pp + sm * pm));
            ++rep.terms;
        }
        // tail: sum until the terms have been negligible for a long stretch
        const double pref = static_cast<double>(q) * divisor3(n1) / n1;
        double part = 0.0;
        int quiet = 0;
        long n2 = n2_cap + 1;
        const long hard = 64 * n2_cap + 20000;
        for (; n2 <= hard; ++n2) {
            auto [pp, pm] = vt.psi_pm(static_cast<double>(n2) * n1 * n1 / c3m);
            double mag = std::abs(pp) + std::abs(pm);
            part += pref * divisor3(n2) / n2 * mag;
            quiet = mag < 1e-12 ? quiet + 1 : 0;
            if (quiet >= 200 && n2 >= 4 * n2_cap) break;
        }
        if (n2 > hard) part = std::numeric_limits<double>::infinity();
        tail += part;
    }
    rep.rhs = static_cast<double>(c) * rhs.value();
    rep.tail_bound = c * tail;
    const double scale = std::abs(rep.lhs);
    rep.rel_err = std::abs(rep.lhs - rep.rhs) / (scale > 0 ? scale : 1.0);
    return rep;
}

double EtaWeight::operator()(double y) const {
    if (!(y > 0)) return 0.0;
    return std::pow(y / M, -0.5) * gamma(y / M);
}

cplx phi_k(double x, double v, const VoronoiParams& p, const EtaWeight& eta, double contour) {
    p.validate();
    if (!(x > 0)) throw NonPositiveArgument("phi_k needs x > 0");
    if (!(contour > -1)) throw HypothesisViolated("contour needs sigma > -1");
    return phi_table(as_array(p.triple), p.k, contour, p.T0, v, p.U_scale, eta).value(x);
}

cplx phi_k_shifted(double x, double v, const VoronoiParams& p, const EtaWeight& eta, double contour) {
    p.validate();
    if (!(x > 0)) throw NonPositiveArgument("phi_k needs x > 0");
    if (!(contour > -1)) throw HypothesisViolated("contour needs sigma > -1");
    const Triple3 a{p.triple.alpha - p.T0, p.triple.beta - p.T0, p.triple.gamma - p.T0};
    PhiTable tab = phi_table(a, p.k, contour, 0.0, v, p.U_scale, eta);
    return std::exp(I * p.T0 * std::log(pi * pi * pi * x)) * tab.value(x);
}

cplx gamma_unitary_factor(double t, double sigma, const LanglandsTriple& triple, double T0, int k) {
    const Triple3 a{triple.alpha - T0, triple.beta - T0, triple.gamma - T0};
    cplx s(sigma, t);
    return std::exp(-(1.5 + 3.0 * s) * std::log(pi) + log_ratio(s, a, k));
}

PhiTruncationReport phi_truncation_fit(const VoronoiParams& p, const EtaWeight& eta, double v,
                                       const std::vector<double>& xs, double epsilon) {
    p.validate();
    PhiTruncationReport rep;
    rep.epsilon = epsilon;
    const double T = p.triple.T(), U = p.U_scale, V = p.V();
    PhiTable tab = phi_table(as_array(p.triple), p.k, p.sigma, p.T0, v, U, eta);
    for (double x : xs) {
        if (!(x > 0)) throw NonPositiveArgument("phi_truncation_fit needs x > 0");
        double base = U * (U + T) * (U + V) * std::pow(T, epsilon) / (x * eta.M);
        double r = std::abs(tab.value(x)) / std::pow(base, p.sigma);
        rep.xs.push_back(x);
        rep.ratios.push_back(r);
        rep.constant = std::max(rep.constant, r);
    }
    return rep;
}

PhiBilinearReport phi_bilinear_check(const ExpCoefficients& b, double c, const VoronoiParams& p,
                                     const EtaWeight& eta, double epsilon) {
    p.validate();
    if (!(c > 0)) throw NonPositiveArgument("phi_bilinear_check needs c > 0");
    PhiBilinearReport rep;
    rep.epsilon = epsilon;
    std::vector<std::pair<int, cplx>> terms;
    for (auto [m, bm] : b.values) {
        if (!std::isfinite(bm.real()) || !std::isfinite(bm.imag())) throw UsageError("coefficients must be finite");
        if (bm != cplx(0.0)) terms.push_back({m, bm});
    }
    if (terms.empty()) return rep;

    const double Te = std::pow(std::max(p.triple.T(), 1.0), epsilon);
    const double U = p.U_scale;
    const Triple3 a = as_array(p.triple);

    // On a common t-grid Phi_k(x, v) = M^{-sigma - i T0} (pi^3 x)^{-sigma}
    //   sum_y amp_y y^{-i T0} e(v U y) K(log(pi^3 x M y)),  K(l) = sum_t q_t e^{-i t l},
    // so sum_m b_m Phi_k(m/c, v) = sum_y e(v U y) B_y with B_y independent of v.
    const double sigma = -0.5;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : {-Te, 0.0, Te}) {
        PhiTilde pt(eta, v, U, sigma, p.T0);
        auto [l, h] = phi_window(pt, a, p.k, sigma, p.T0, v, U, eta);
        lo = std::min(lo, l);
        hi = std::max(hi, h);
    }
    std::vector<double> ts, tw;
    contour_nodes(lo, hi, ts, tw);
    std::vector<cplx> q(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) q[i] = tw[i] / (2 * pi) * std::exp(log_ratio(cplx(sigma, ts[i]), a, p.k));

    const double T_max = std::max(std::abs(lo), std::abs(hi)) + std::abs(p.T0);
    LogNodes yn = log_nodes(eta.gamma, T_max + 2 * pi * Te * U * eta.gamma.x_hi);
    const size_t ny = yn.u.size();
    std::vector<cplx> By(ny);
    for (size_t j = 0; j < ny; ++j) {
        cplx acc = 0.0;
        for (auto [m, bm] : terms) {
            const double Lx = std::log(pi * pi * pi * m / c * eta.M);
            const double l = Lx + yn.u[j];
            CompensatedSum<cplx> K;
            for (size_t i = 0; i < ts.size(); ++i) K.add(q[i] * std::polar(1.0, -ts[i] * l));
            acc += bm * std::pow(pi * pi * pi * m / c, -sigma) * K.value();
        }
        const double amp = yn.w[j] * std::exp((-0.5 - sigma) * yn.u[j]);
        By[j] = amp * std::polar(1.0, -p.T0 * yn.u[j]) * acc;
    }
    const cplx pref = std::exp((-sigma - I * p.T0) * std::log(eta.M));

    // v-integral over the bump support, about ten radians of e(v U z) per panel
    const int panels = 2 + static_cast<int>(std::ceil(4 * pi * Te * U * eta.gamma.x_hi / 10));
    const GaussRule& g = gauss_legendre_rule(20);
    const double h = Te / panels;
    CompensatedSum<double> lhs;
    for (int k = 0; k < panels; ++k) {
        double mid = -Te + (2 * k + 1) * h;
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            double v = mid + h * g.nodes[i];
            CompensatedSum<cplx> S;
            for (size_t j = 0; j < ny; ++j) S.add(By[j] * std::polar(1.0, 2 * pi * v * U * std::exp(yn.u[j])));
            lhs.add(h * g.weights[i] * standard_bump_value(v / Te) * std::norm(pref * S.value()));
        }
    }
    rep.lhs = lhs.value();

    // int_{-L}^{L} (m/n)^{it} dt = 2 sin(L l) / l
    const double L = Te * U;
    CompensatedSum<double> rhs;
    for (auto [m, bm] : terms)
        for (auto [n, bn] : terms) {
            cplx am = bm * std::polar(1.0, p.T0 * std::log(double(m))) * std::sqrt(m / c);
            cplx an = bn * std::polar(1.0, p.T0 * std::log(double(n))) * std::sqrt(n / c);
            double l = std::log(double(m) / n);
            double kern = l == 0.0 ? 2 * L : 2 * std::sin(L * l) / l;
            rhs.add((am * std::conj(an)).real() * kern);
        }
    rep.rhs = eta.M * Te / U * rhs.value();
    rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

}  // namespace gl3lab
