// Hecke eigenvalues of an SL(2,Z) Maass cusp form by Hejhal's collocation method.
// Refines the spectral parameter from a starting guess, then writes a data file
// in the `t ... parity ...` / `p ... lambda ...` format.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gl3lab/kloosterman.hpp"
#include "gl3lab/special_functions.hpp"

namespace {

constexpr double pi = std::numbers::pi;

struct Point {
    double x, y;
};

// Into the standard fundamental domain by translations and z -> -1/z.
Point pullback(double x, double y) {
    for (int it = 0; it < 1000; ++it) {
        x -= std::round(x);
        double r2 = x * x + y * y;
        if (r2 >= 1.0 - 1e-15) break;
        x = -x / r2;
        y = y / r2;
    }
    return {x, y};
}

// Dense solve with partial pivoting; A is n x n row-major.
std::vector<double> lu_solve(std::vector<double> A, std::vector<double> b, int n) {
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A[i * n + k]) > std::abs(A[piv * n + k])) piv = i;
        if (A[piv * n + k] == 0.0) throw std::runtime_error("singular collocation matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            double f = A[i * n + k] / A[k * n + k];
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) A[i * n + j] -= f * A[k * n + j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[i * n + j] * x[j];
        x[i] = s / A[i * n + i];
    }
    return x;
}

// c(1..M) with c(1) = 1, from collocation on the horocycle at height Y.
std::vector<double> solve_coefficients(double R, bool even, double Y, int M) {
    const int Q = M + 12;
    auto trig = [&](double t) { return even ? std::cos(t) : std::sin(t); };
    std::vector<double> xm(Q), B(static_cast<size_t>(Q) * M);
    for (int m = 0; m < Q; ++m) {
        xm[m] = (m + 0.5) / (2.0 * Q);
        Point p = pullback(xm[m], Y);
        double sy = std::sqrt(p.y);
        for (int n = 1; n <= M; ++n)
            B[static_cast<size_t>(m) * M + (n - 1)] =
                sy * gl3lab::bessel_k_imag_scaled(R, 2 * pi * n * p.y) * trig(2 * pi * n * p.x);
    }
    // V[k][n] = delta_{kn} sqrt(Y) K(2 pi k Y) - (2/Q) sum_m B[m][n] trig(2 pi k x_m)
    std::vector<double> V(static_cast<size_t>(M) * M, 0.0), tk(Q);
    for (int k = 1; k <= M; ++k) {
        for (int m = 0; m < Q; ++m) tk[m] = trig(2 * pi * k * xm[m]) * (2.0 / Q);
        double* row = &V[static_cast<size_t>(k - 1) * M];
        for (int m = 0; m < Q; ++m) {
            const double* bm = &B[static_cast<size_t>(m) * M];
            double w = tk[m];
            for (int n = 0; n < M; ++n) row[n] -= w * bm[n];
        }
        row[k - 1] += std::sqrt(Y) * gl3lab::bessel_k_imag_scaled(R, 2 * pi * k * Y);
    }
    // unknowns c(2..M), equations k = 2..M
    int n = M - 1;
    std::vector<double> A(static_cast<size_t>(n) * n), rhs(n);
    for (int k = 2; k <= M; ++k) {
        for (int j = 2; j <= M; ++j) A[static_cast<size_t>(k - 2) * n + (j - 2)] = V[static_cast<size_t>(k - 1) * M + (j - 1)];
        rhs[k - 2] = -V[static_cast<size_t>(k - 1) * M];
    }
    auto c = lu_solve(std::move(A), std::move(rhs), n);
    std::vector<double> out(M + 1, 0.0);
    out[1] = 1.0;
    for (int j = 2; j <= M; ++j) out[j] = c[j - 2];
    return out;
}

int size_for(double R, double Y) { return static_cast<int>(std::ceil((R + 40.0) / (2 * pi * Y))); }

// Mismatch of c(2) and c(3) between two collocation heights; zero at an eigenvalue.
double mismatch(double R, bool even) {
    const double y1 = 0.42, y2 = 0.36;
    auto a = solve_coefficients(R, even, y1, size_for(R, y1));
    auto b = solve_coefficients(R, even, y2, size_for(R, y2));
    return (a[2] - b[2]) + (a[3] - b[3]);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hecke eigenvalues of a level one Maass form"};
    double R = 13.7797;
    std::string parity = "even", out_path;
    long p_max = 200;
    double Y = 0.0;
    app.add_option("--r", R, "starting guess for the spectral parameter");
    app.add_option("--parity", parity)->check(CLI::IsMember({"even", "odd"}));
    app.add_option("--pmax", p_max, "largest prime written");
    app.add_option("--height", Y, "collocation height for the final solve (default from pmax)");
    app.add_option("-o,--output", out_path)->required();
    CLI11_PARSE(app, argc, argv);
    bool even = parity == "even";

    // secant refinement of R
    double r0 = R - 1e-4, r1 = R + 1e-4;
    double f0 = mismatch(r0, even), f1 = mismatch(r1, even);
    for (int it = 0; it < 30 && std::abs(r1 - r0) > 1e-13; ++it) {
        double r2 = r1 - f1 * (r1 - r0) / (f1 - f0);
        r0 = r1;
        f0 = f1;
        r1 = r2;
        f1 = mismatch(r1, even);
        std::fprintf(stderr, "R = %.15f  mismatch = %.3e\n", r1, f1);
    }
    R = r1;

    // coefficients up to p_max are trusted while 2 pi n Y stays below ~ 18
    if (Y <= 0) Y = std::min(0.3, 17.0 / (2 * pi * p_max));
    int M = size_for(R, Y);
    std::fprintf(stderr, "final solve: Y = %.5f, M = %d\n", Y, M);
    auto c = solve_coefficients(R, even, Y, M);
    auto c2 = solve_coefficients(R, even, Y * 0.93, size_for(R, Y * 0.93));

    double hecke = 0.0, spread = 0.0;
    for (long m = 2; m * m <= p_max; ++m)
        for (long n = m + 1; m * n <= p_max; ++n)
            if (gl3lab::gcd(m, n) == 1) hecke = std::max(hecke, std::abs(c[m * n] - c[m] * c[n]));
    for (long p : gl3lab::primes_up_to(p_max)) spread = std::max(spread, std::abs(c[p] - c2[p]));
    std::fprintf(stderr, "max Hecke residual %.2e, max height spread %.2e\n", hecke, spread);

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 2;
    }
    out << "# SL(2,Z) Maass cusp form, Hejhal collocation\n";
    out << "# Hecke residual " << std::scientific << std::setprecision(2) << hecke << ", height spread " << spread << "\n";
    out << std::fixed << std::setprecision(12) << "t " << R << " parity " << parity << "\n";
    for (long p : gl3lab::primes_up_to(p_max)) out << "p " << p << " lambda " << std::setprecision(12) << c[p] << "\n";
    return 0;
}
