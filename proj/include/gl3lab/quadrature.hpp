#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "gl3lab/errors.hpp"

namespace gl3lab {

enum class QuadratureKind { gauss_legendre, double_exponential };

struct QuadratureSpec {
    QuadratureKind kind = QuadratureKind::double_exponential;
    int max_refinements = 12;
    double abs_tol = 1e-14;
    double rel_tol = 1e-12;

    void validate() const;
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    long evaluations = 0;
};

// Neumaier summation; works for double and std::complex<double>.
template <class T>
class CompensatedSum {
public:
    void add(const T& x) {
        if constexpr (std::is_same_v<T, double>) {
            step(sum_, c_, x);
        } else {
            double sr = sum_.real(), cr = c_.real();
            double si = sum_.imag(), ci = c_.imag();
            step(sr, cr, x.real());
            step(si, ci, x.imag());
            sum_ = T(sr, si);
            c_ = T(cr, ci);
        }
    }
    T value() const { return sum_ + c_; }

private:
    static void step(double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    T sum_{};
    T c_{};
};

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre nodes on [-1,1]; cached per order.
const GaussRule& gauss_legendre_rule(int order);

// Fixed composite Gauss-Legendre: `panels` equal panels of `order` points.
template <class T, class F>
T gauss_panels(F&& f, double a, double b, int panels, int order = 20) {
    const GaussRule& g = gauss_legendre_rule(order);
    CompensatedSum<T> acc;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h;
        for (int i = 0; i < order; ++i) acc.add(T(f(mid + 0.5 * h * g.nodes[i])) * (0.5 * h * g.weights[i]));
    }
    return acc.value();
}

namespace detail {

template <class T>
double magnitude(const T& v) {
    return std::abs(v);
}

// One double-exponential map: x(t) and dx/dt.
struct DEMap {
    int kind;  // 0 finite, 1 half-line [a, inf), 2 whole line, 3 half-line (-inf, b]
    double a, b;

    std::pair<double, double> operator()(double t) const {
        constexpr double hp = std::numbers::pi / 2;
        switch (kind) {
            case 0: {
                double u = hp * std::sinh(t);
                double ch = std::cosh(u);
                double half = 0.5 * (b - a);
                // distance to the nearer endpoint computed without cancellation
                double e = std::exp(-2 * std::abs(u));
                double off = half * 2 * e / (1 + e);
                double x = t >= 0 ? b - off : a + off;
                return {x, half * hp * std::cosh(t) / (ch * ch)};
            }
            case 1: {
                double e = std::exp(hp * std::sinh(t));
                return {a + e, e * hp * std::cosh(t)};
            }
            case 3: {
                double e = std::exp(hp * std::sinh(t));
                return {b - e, e * hp * std::cosh(t)};
            }
            default: {
                double u = hp * std::sinh(t);
                return {std::sinh(u), std::cosh(u) * hp * std::cosh(t)};
            }
        }
    }
};

template <class T, class F>
QuadResult<T> double_exponential(F&& f, DEMap map, const QuadratureSpec& spec) {
    const double tmax = map.kind == 0 ? 4.0 : 4.5;
    long evals = 0;
    auto term = [&](double t) -> T {
        auto [x, w] = map(t);
        if (w == 0.0 || !std::isfinite(w)) return T{};
        if (map.kind == 0 && (x <= map.a || x >= map.b)) return T{};
        T v = T(f(x)) * w;
        ++evals;
        if (!std::isfinite(magnitude(v))) {
            if (std::abs(t) > 3.0) return T{};
            throw ConvergenceFailure("non-finite integrand at x=" + std::to_string(x), 0.0,
                                     std::numeric_limits<double>::infinity());
        }
        return v;
    };

    double h = 0.5;
    CompensatedSum<T> sum;
    for (double t = -tmax; t <= tmax + 1e-12; t += h) sum.add(term(t));
    T prev = sum.value() * h;
    double err = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= spec.max_refinements; ++level) {
        h *= 0.5;
        for (double t = -tmax + h; t < tmax; t += 2 * h) sum.add(term(t));
        T cur = sum.value() * h;
        err = magnitude(cur - prev);
        if (level >= 3 && err <= std::max(spec.abs_tol, spec.rel_tol * magnitude(cur))) return {cur, err, evals};
        prev = cur;
    }
    throw ConvergenceFailure("double-exponential quadrature did not converge", magnitude(prev), err);
}

template <class T, class F>
T gl_rule(F& f, double a, double b, int order, long& evals) {
    const GaussRule& g = gauss_legendre_rule(order);
    CompensatedSum<T> acc;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < order; ++i) acc.add(T(f(mid + half * g.nodes[i])) * (half * g.weights[i]));
    evals += order;
    return acc.value();
}

template <class T, class F>
T gl_adaptive(F& f, double a, double b, T whole, double tol, int depth, long& evals, double& err_out) {
    double m = 0.5 * (a + b);
    T left = gl_rule<T>(f, a, m, 15, evals);
    T right = gl_rule<T>(f, m, b, 15, evals);
    double err = magnitude(left + right - whole);
    if (err <= tol || depth <= 0) {
        err_out += err;
        if (err > tol) err_out = std::numeric_limits<double>::infinity();
        return left + right;
    }
    return gl_adaptive<T>(f, a, m, left, 0.5 * tol, depth - 1, evals, err_out) +
           gl_adaptive<T>(f, m, b, right, 0.5 * tol, depth - 1, evals, err_out);
}

}  // namespace detail

// Integrates f over [a,b]; either endpoint may be infinite (double-exponential only).
template <class T = double, class F>
QuadResult<T> integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    bool ia = std::isinf(a), ib = std::isinf(b);
    if (spec.kind == QuadratureKind::double_exponential || ia || ib) {
        detail::DEMap map{0, a, b};
        if (ia && ib)
            map.kind = 2;
        else if (ib)
            map.kind = 1;
        else if (ia)
            map.kind = 3;
        return detail::double_exponential<T>(f, map, spec);
    }
    long evals = 0;
    T whole = detail::gl_rule<T>(f, a, b, 15, evals);
    double err = 0.0;
    double tol = std::max(spec.abs_tol, spec.rel_tol * detail::magnitude(whole));
    T v = detail::gl_adaptive<T>(f, a, b, whole, tol, spec.max_refinements, evals, err);
    if (!std::isfinite(err))
        throw ConvergenceFailure("adaptive Gauss-Legendre exhausted its budget", detail::magnitude(v), err);
    return {v, err, evals};
}

}  // namespace gl3lab
