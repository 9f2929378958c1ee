#include "gl3lab/spectral_params.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "gl3lab/errors.hpp"

namespace gl3lab {

namespace {

using cplx = std::complex<double>;

void require_beta_nonnegative(const LanglandsTriple& t) {
    if (t.beta < 0) throw HypothesisViolated("requires gamma <= 0 <= beta <= alpha");
}

double log2T(const LanglandsTriple& t) {
    double L = std::log(std::max(t.T(), std::exp(1.0)));
    return L * L;
}

}  // namespace

bool SpectralType::tempered(double tol) const {
    return std::abs(nu1.real() - 1.0 / 3.0) <= tol && std::abs(nu2.real() - 1.0 / 3.0) <= tol;
}

double LanglandsTriple::T() const { return std::abs(alpha) + std::abs(beta) + std::abs(gamma); }

bool LanglandsTriple::valid(double tol) const {
    return std::abs(sum()) <= tol * std::max(1.0, T()) && gamma <= beta && beta <= alpha;
}

LanglandsTriple make_triple(double a, double b, double c) {
    std::array<double, 3> v{a, b, c};
    std::stable_sort(v.begin(), v.end(), [](double x, double y) { return x > y; });
    return {v[0], v[1], v[2]};
}

LanglandsTriple to_langlands(const SpectralType& nu, bool allow_nontempered, double tol) {
    const cplx I(0.0, 1.0);
    // i alpha = -nu1 - 2 nu2 + 1, i beta = -nu1 + nu2, i gamma = 2 nu1 + nu2 - 1
    cplx a = (-nu.nu1 - 2.0 * nu.nu2 + 1.0) / I;
    cplx b = (-nu.nu1 + nu.nu2) / I;
    cplx c = (2.0 * nu.nu1 + nu.nu2 - 1.0) / I;
    double worst = std::max({std::abs(a.imag()), std::abs(b.imag()), std::abs(c.imag())});
    if (worst > tol && !allow_nontempered)
        throw NonTempered("Langlands parameters have imaginary part " + std::to_string(worst));
    return make_triple(a.real(), b.real(), c.real());
}

SpectralType from_langlands(const LanglandsTriple& t) {
    const cplx I(0.0, 1.0);
    cplx nu2 = (1.0 - I * t.alpha + I * t.beta) / 3.0;
    cplx nu1 = nu2 - I * t.beta;
    return {nu1, nu2};
}

LanglandsTriple dual(const LanglandsTriple& t) { return {-t.gamma, -t.beta, -t.alpha}; }

double conductor_q(const LanglandsTriple& t, double z) {
    return (1 + std::abs(z - t.alpha)) * (1 + std::abs(z - t.beta)) * (1 + std::abs(z - t.gamma));
}

double conductor_q2(const LanglandsTriple& t, double tt, double tau) {
    return conductor_q(t, tt + tau) * conductor_q(t, tt - tau);
}

double wf_exponent_xy(const LanglandsTriple& t, double X, double Y, WfMode mode) {
    require_beta_nonnegative(t);
    const double a = t.alpha, b = t.beta, g = t.gamma;
    if (mode == WfMode::closed) {
        return -std::abs(X - Y) - (a - b) - (a - g) - (b - g) + std::abs(X - a) + std::abs(X - b) +
               std::abs(X - g) + std::abs(Y - a) + std::abs(Y - b) + std::abs(Y - g);
    }
    if (X < Y) std::swap(X, Y);
    int row = Y >= a ? 0 : Y >= b ? 1 : Y >= g ? 2 : 3;
    int col = X <= g ? 0 : X <= b ? 1 : X <= a ? 2 : 3;
    // Cells left blank in the table only meet X >= Y on their boundary, where
    // the neighbouring cell gives the same value.
    if (row == 0) col = 3;
    if (row == 1) col = std::max(col, 2);
    if (row == 2) col = std::max(col, 1);
    double half = 0.0;
    switch (row * 4 + col) {
        case 3: half = (X - b) + 2 * (Y - a); break;
        case 6: half = Y - b; break;
        case 7: half = (X - a) + (Y - b); break;
        case 9: half = b - X; break;
        case 10: half = 0.0; break;
        case 11: half = X - a; break;
        case 12: half = 2 * (g - X) + (b - Y); break;
        case 13: half = (b - X) + (g - Y); break;
        case 14: half = g - Y; break;
        case 15: half = (X - a) + (g - Y); break;
        default: half = std::numeric_limits<double>::quiet_NaN();
    }
    return 2 * half;
}

double wf_exponent(const LanglandsTriple& t, double tt, double tau, WfMode mode) {
    return wf_exponent_xy(t, tt + tau, tt - tau, mode);
}

bool ConductorBox::contains(double X, double Y) const {
    return X >= x1 && X <= x1 + u_width && Y >= y1 && Y <= y1 + v_width;
}

std::vector<double> dyadic_ladder(double cap) {
    std::vector<double> out;
    if (cap < 1.0) return out;
    for (double u = 1.0; u < cap; u *= 2) out.push_back(u);
    out.push_back(cap);
    return out;
}

double partition_tolerance(const LanglandsTriple& t, const PartitionOptions& opt) {
    double tol = 32.0;
    // each thickened direction can move the conductor by a factor 1 + log^2 T
    if (opt.thicken_edges) tol *= (1 + log2T(t)) * (1 + log2T(t));
    return tol;
}

std::vector<ConductorBox> enumerate_partition(const LanglandsTriple& t, const PartitionOptions& opt) {
    require_beta_nonnegative(t);
    const double a = t.alpha, b = t.beta, g = t.gamma;
    const double L = a - b, M = b - g, T = t.T();
    std::vector<ConductorBox> out;
    if (L < 4) return out;

    const double pad = opt.thicken_edges ? log2T(t) + 1.0 : 0.0;
    for (double U : dyadic_ladder(L / 4)) {
        for (XSide xs : {XSide::above_beta, XSide::below_alpha}) {
            double X1 = xs == XSide::above_beta ? b + U : a - 2 * U;
            auto emit = [&](double Y1, double V, YKind kind) {
                double Q = 0.0;
                switch (kind) {
                    case YKind::near_beta_small: Q = T * T * U * V * (1 + L) * (1 + L); break;
                    case YKind::near_beta_large: Q = T * T * U * V * V * (1 + L); break;
                    case YKind::near_gamma: Q = T * T * T * U * V * (1 + L); break;
                }
                ConductorBox box;
                box.x1 = X1 - pad;
                box.y1 = Y1 - pad;
                box.u_width = U + 2 * pad;
                box.v_width = V + 2 * pad;
                box.q_value = Q;
                box.x_side = xs;
                box.y_kind = kind;
                box.u = U;
                box.v = V;
                box.thickened = opt.thicken_edges;
                out.push_back(box);
            };
            for (double V : dyadic_ladder(M / 4)) {
                emit(b - 2 * V, V, V <= L / 4 ? YKind::near_beta_small : YKind::near_beta_large);
                emit(g + V, V, YKind::near_gamma);
            }
        }
    }
    return out;
}

std::vector<FamilyTuple> families_for(const LanglandsTriple& t, double U, double V) {
    const double a = t.alpha, b = t.beta, g = t.gamma;
    const double L = a - b, M = b - g, T = t.T();
    std::vector<FamilyTuple> out;
    struct Row {
        const char* label;
        XSide xs;
        YKind yk;
    };
    const bool u_big = U > V;
    std::vector<Row> rows;
    if (V <= L / 4) {
        rows.push_back({u_big ? "1a" : "1b", XSide::above_beta, YKind::near_beta_small});
        rows.push_back({u_big ? "2a" : "2b", XSide::below_alpha, YKind::near_beta_small});
    } else if (V <= M / 4) {
        rows.push_back({"3", XSide::above_beta, YKind::near_beta_large});
        rows.push_back({"4", XSide::below_alpha, YKind::near_beta_large});
    }
    if (V <= M / 4) {
        rows.push_back({u_big ? "5a" : "5b", XSide::above_beta, YKind::near_gamma});
        rows.push_back({u_big ? "6a" : "6b", XSide::below_alpha, YKind::near_gamma});
    }
    for (const Row& row : rows) {
        FamilyTuple f;
        f.case_label = row.label;
        f.u = U;
        f.v = V;
        f.x1 = row.xs == XSide::above_beta ? b + U : a - 2 * U;
        f.y1 = row.yk == YKind::near_gamma ? g + V : b - 2 * V;
        f.family_lo = f.x1 - f.y1 - V;
        std::string lbl = row.label;
        // T0 per table: 'a' rows use the Y edge, 'b' rows and rows 3, 4 the X edge
        if (lbl == "1a" || lbl == "1b" || lbl == "2a" || lbl == "3" || lbl == "5b")
            f.t0 = b;
        else if (lbl == "2b" || lbl == "4" || lbl == "6b")
            f.t0 = a;
        else
            f.t0 = g;
        f.r = std::min(U, V);
        f.d = 0.5 * (U + V);
        f.s = 0.5 * f.family_lo;
        if (lbl == "1a") f.table_d = U, f.table_s = U;
        else if (lbl == "1b" || lbl == "3") f.table_d = V, f.table_s = V;
        else if (lbl == "2a") f.table_d = U, f.table_s = L;
        else if (lbl == "2b") f.table_d = V, f.table_s = L;
        else if (lbl == "4") f.table_d = V, f.table_s = V;
        else if (lbl == "5a" || lbl == "6a") f.table_d = U, f.table_s = T;
        else f.table_d = V, f.table_s = T;
        switch (row.yk) {
            case YKind::near_beta_small: f.q = T * T * U * V * (1 + L) * (1 + L); break;
            case YKind::near_beta_large: f.q = T * T * U * V * V * (1 + L); break;
            case YKind::near_gamma: f.q = T * T * T * U * V * (1 + L); break;
        }
        for (int sign : {1, -1}) {
            f.sign = sign;
            out.push_back(f);
        }
    }
    return out;
}

std::vector<FamilyTuple> enumerate_families(const LanglandsTriple& t) {
    require_beta_nonnegative(t);
    const double L = t.alpha - t.beta, M = t.beta - t.gamma;
    std::vector<FamilyTuple> out;
    if (L < 4) return out;
    for (double U : dyadic_ladder(L / 4))
        for (double V : dyadic_ladder(M / 4)) {
            auto f = families_for(t, U, V);
            out.insert(out.end(), f.begin(), f.end());
        }
    return out;
}

FamilyFit fit_family_constants(const LanglandsTriple& t, const std::vector<FamilyTuple>& fams) {
    FamilyFit fit;
    if (fams.empty()) return fit;
    const double L = t.alpha - t.beta, T = t.T();
    fit.count_over_log2T = fams.size() / log2T(t);
    fit.min_s_ratio = fit.min_d_ratio = fit.min_q_ratio = std::numeric_limits<double>::infinity();
    for (const auto& f : fams) {
        double sr = f.s / f.table_s, dr = f.d / f.table_d;
        double qr = f.q / (T * T * f.d * f.r * (f.s + L) * (1 + L));
        fit.max_s_ratio = std::max(fit.max_s_ratio, sr);
        fit.min_s_ratio = std::min(fit.min_s_ratio, sr);
        fit.max_d_ratio = std::max(fit.max_d_ratio, dr);
        fit.min_d_ratio = std::min(fit.min_d_ratio, dr);
        fit.max_q_ratio = std::max(fit.max_q_ratio, qr);
        fit.min_q_ratio = std::min(fit.min_q_ratio, qr);
    }
    return fit;
}

}  // namespace gl3lab
