#include "gl3lab/cli_report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "gl3lab/errors.hpp"
#include "gl3lab/kloosterman.hpp"
#include "gl3lab/kuznetsov.hpp"
#include "gl3lab/lfunctions.hpp"
#include "gl3lab/maass_io.hpp"
#include "gl3lab/sieve.hpp"
#include "gl3lab/spectral_params.hpp"
#include "gl3lab/whittaker_stade.hpp"
#include "json.hpp"

#ifndef GL3LAB_DATA_DIR
#define GL3LAB_DATA_DIR "data"
#endif

namespace gl3lab {

using json = nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool is_known_suite(const std::string& s) {
    const auto& k = known_suites();
    return std::find(k.begin(), k.end(), s) != k.end();
}

bool parse_number(const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return !s.empty() && end == s.c_str() + s.size();
}

bool is_tolerance_key(const std::string& key) {
    return key.size() >= 3 && key.compare(key.size() - 3, 3, "tol") == 0;
}

// doubles as JSON numbers; non-finite values as strings
json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double from_number(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw ParseError("expected a number", 0);
}

CheckStatus status_from(const std::string& s) {
    if (s == "pass") return CheckStatus::pass;
    if (s == "fail") return CheckStatus::fail;
    if (s == "warn") return CheckStatus::warn;
    throw ParseError("unknown status " + s, 0);
}

std::string fmt(double x, int prec = 4) {
    std::ostringstream o;
    o << std::setprecision(prec) << x;
    return o.str();
}

LanglandsTriple random_triple(std::mt19937_64& rng, double scale, bool beta_nonnegative = false) {
    std::uniform_real_distribution<double> d(-scale, scale);
    for (;;) {
        double a = d(rng), b = d(rng);
        LanglandsTriple t = make_triple(a, b, -a - b);
        if (!beta_nonnegative || t.beta >= 0) return t;
    }
}

// ---------------------------------------------------------------------------------------------

struct Tolerance {
    double value;
    std::string source;
};

class Suite {
public:
    Suite(std::string name, const RunConfig& cfg, const GoldenStore& goldens, GoldenStore* record)
        : name_(std::move(name)), cfg_(cfg), goldens_(goldens), record_(record) {}

    const RunConfig& cfg() const { return cfg_; }
    double param(const std::string& p, double fallback) const { return cfg_.param(name_ + "." + p, fallback); }
    long param(const std::string& p, long fallback) const { return cfg_.param(name_ + "." + p, fallback); }

    Tolerance tol(const std::string& check, double fallback) const {
        const std::string key = name_ + "." + check + "_tol";
        if (cfg_.params.count(key)) return {cfg_.param(key, fallback), "config:" + key};
        return {fallback, "default"};
    }

    std::optional<double> golden(const std::string& check, const std::string& constant) const {
        if (record_) return std::nullopt;
        return goldens_.get(name_ + "." + check + "." + constant);
    }

    // Runs body, which fills lhs, rhs, err, status and fitted constants, then applies the golden rule.
    void run(const std::string& check, const std::function<void(Check&)>& body) {
        Check c;
        c.name = name_ + "." + check;
        auto t0 = std::chrono::steady_clock::now();
        try {
            body(c);
        } catch (const Error& e) {
            c.status = CheckStatus::fail;
            c.note = std::string("error: ") + e.what();
        }
        c.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        apply_goldens(c);
        checks_.push_back(std::move(c));
    }

    // pass iff err <= tolerance
    static void bound(Check& c, double lhs, double rhs, double err, const Tolerance& t) {
        c.lhs = lhs;
        c.rhs = rhs;
        c.err = err;
        c.tolerance = t.value;
        c.tolerance_source = t.source;
        c.status = err <= t.value ? CheckStatus::pass : CheckStatus::fail;
    }

    std::vector<Check> take() { return std::move(checks_); }

private:
    void apply_goldens(Check& c) {
        for (const auto& [k, v] : c.fitted_constants) {
            const std::string key = c.name + "." + k;
            if (record_) {
                record_->set(key, v,
                             "recorded by gl3lab " + std::string(kVersion) + ", seed " + std::to_string(cfg_.seed) +
                                 ", precision " + precision_name(cfg_.precision));
                continue;
            }
            auto g = goldens_.get(key);
            if (!g) {
                if (c.status == CheckStatus::pass) c.status = CheckStatus::warn;
                c.note += (c.note.empty() ? "" : "; ") + std::string("no golden for ") + k;
            } else if (std::abs(v) > GoldenStore::kRegressionFactor * std::abs(*g)) {
                c.status = CheckStatus::fail;
                c.note += (c.note.empty() ? "" : "; ") + k + " = " + fmt(v, 6) + " exceeds 1.1 x golden " + fmt(*g, 6);
            }
        }
    }

    std::string name_;
    const RunConfig& cfg_;
    const GoldenStore& goldens_;
    GoldenStore* record_;
    std::vector<Check> checks_;
};

MaassFormGL2 load_form(const RunConfig& cfg, const std::string& file) {
    auto forms = ingest_maass_data(cfg.data_dir() / "maass" / file);
    if (forms.empty()) throw IoError("no form in " + file);
    return forms.front();
}

// ---------------------------------------------------------------------------------------------

void suite_stade(Suite& s) {
    const LanglandsTriple t{0.4, 0.1, -0.5};
    s.run("gl3gl2", [&](Check& c) {
        auto r = verify_stade_gl3gl2(s.param("s", 1.3), s.param("tau", 0.7), t);
        Suite::bound(c, std::abs(r.lhs), std::abs(r.rhs), r.rel_err, s.tol("gl3gl2", 1e-6));
        c.note = "implied c = " + fmt(r.implied_c, 10);
    });
    s.run("gl3gl3_a", [&](Check& c) {
        auto r = verify_stade_gl3gl3(1.4, t);
        Suite::bound(c, std::abs(r.lhs), std::abs(r.rhs), r.rel_err, s.tol("gl3gl3", 1e-5));
    });
    s.run("gl3gl3_b", [&](Check& c) {
        auto r = verify_stade_gl3gl3(2.0, LanglandsTriple{});
        Suite::bound(c, std::abs(r.lhs), std::abs(r.rhs), r.rel_err, s.tol("gl3gl3", 1e-5));
    });
    s.run("gamma_ratio", [&](Check& c) {
        std::mt19937_64 rng(s.cfg().seed);
        double worst = 0.0, at = 1.0;
        for (int i = 0; i < 100; ++i) {
            double r = landau_ratio(random_triple(rng, 60.0));
            if (std::abs(r - 1) >= worst) worst = std::abs(r - 1), at = r;
        }
        Suite::bound(c, at, 1.0, worst, s.tol("gamma_ratio", 1e-9));
        c.note = "100 random triples, |parameters| <= 60";
    });
    s.run("gsize", [&](Check& c) {
        auto fit = fit_gsize_constant(LanglandsTriple{6, 1, -7}, 28.0, 81);
        Suite::bound(c, fit.c_upper, fit.c_lower, 0.0, {0.0, "default"});
        c.status = std::isfinite(fit.c_upper) && std::isfinite(fit.c_lower) ? CheckStatus::pass : CheckStatus::fail;
        c.fitted_constants["c_upper"] = fit.c_upper;
        c.note = "log-size of G_tau on the critical line, T = 14";
    });
}

void suite_kloosterman(Suite& s) {
    const long b_max = s.param("b_max", 12L);
    const int vectors = static_cast<int>(s.param("vectors", 20L));
    s.run("weil", [&](Check& c) {
        auto w = weil_sweep(s.param("p_max", 97L));
        Suite::bound(c, w.worst_ratio, 1.0, std::max(0.0, w.worst_ratio - 1), s.tol("weil", 1e-12));
        c.note = std::to_string(w.sums) + " sums; worst p = " + std::to_string(w.worst_p);
    });
    s.run("lemma_9_2", [&](Check& c) {
        double worst = 0.0, lhs = 0.0, rhs = 0.0;
        int cells = 0;
        for (long b = 1; b <= b_max; ++b)
            for (long r = 1; r <= 9; ++r) {
                if (!divides_power(r, b)) continue;
                ++cells;
                for (int k = 0; k < vectors; ++k) {
                    auto rep = verify_lemma_9_2(b, r, random_coefficients(24, s.cfg().seed * 100000 + 1000 * b + 10 * r + k));
                    if (rep.abs_err >= worst) worst = rep.abs_err, lhs = rep.lhs, rhs = rep.rhs;
                }
            }
        Suite::bound(c, lhs, rhs, worst, s.tol("lemma_9_2", 1e-8));
        c.note = std::to_string(cells) + " (b, r) cells; absolute error";
    });
    s.run("lemma_9_3", [&](Check& c) {
        double worst = -1e300, lhs = 0.0, rhs = 0.0;
        for (long q = 1; q <= b_max; ++q)
            for (int k = 0; k < vectors; ++k) {
                auto rep = verify_lemma_9_3(q, random_coefficients(24, s.cfg().seed * 100000 + 500 * q + k));
                double viol = -rep.slack / rep.rhs;
                if (viol >= worst) worst = viol, lhs = rep.lhs, rhs = rep.rhs;
            }
        Suite::bound(c, lhs, rhs, std::max(0.0, worst), s.tol("lemma_9_3", 1e-9));
        c.note = "relative violation of lhs <= rhs";
    });
    s.run("lemma_9_4", [&](Check& c) {
        double worst = -1e300, lhs = 0.0, rhs = 0.0;
        int cells = 0;
        for (long b = 1; b <= b_max; ++b)
            for (long r = 1; r <= 9; ++r) {
                if (!divides_power(r, b)) continue;
                for (long q = 1; q <= 5; ++q) {
                    if (gcd(q, b) != 1) continue;
                    ++cells;
                    auto rep = verify_lemma_9_4(b, q, r, random_coefficients(24, s.cfg().seed * 100000 + 700 * b + 50 * r + q));
                    double viol = -rep.slack / rep.rhs;
                    if (viol >= worst) worst = viol, lhs = rep.lhs, rhs = rep.rhs;
                }
            }
        Suite::bound(c, lhs, rhs, std::max(0.0, worst), s.tol("lemma_9_4", 1e-9));
        c.note = std::to_string(cells) + " (b, s, r) cells; relative violation of lhs <= rhs";
    });
    s.run("multiplicativity", [&](Check& c) {
        double worst = 0.0;
        for (long b : {1, 2, 4, 6})
            for (long q : {1, 5, 7})
                for (long r : {1, 2})
                    for (long x = 1; x <= 3; ++x)
                        for (long n = 0; n <= 5; ++n) {
                            if (gcd(q, b * r) != 1) continue;
                            worst = std::max(worst, multiplicativity_residual(b, q, r, x, 1, n));
                        }
        Suite::bound(c, worst, 0.0, worst, s.tol("multiplicativity", 1e-9));
    });
}

void suite_sieve(Suite& s) {
    SieveTrialConfig tc;
    tc.B = static_cast<int>(s.param("B", 10L));
    tc.T = s.param("T", 5.0);
    tc.N = static_cast<int>(s.param("N", 60L));
    tc.C = s.param("C", 60.0);
    tc.trials = static_cast<int>(s.param("trials", 100L));
    tc.seed = s.cfg().seed;
    const double eps = s.cfg().epsilon;

    for (auto [name, v] : {std::pair{"gallagher_multiplicative", SieveVariant::multiplicative},
                           std::pair{"gallagher_additive", SieveVariant::additive}}) {
        const std::string check = name;
        s.run(check, [&, v](Check& c) {
            tc.validate();
            auto r = gallagher_check(tc, v);
            c.fitted_constants["max_ratio"] = r.max_ratio;
            auto g = s.golden(check, "max_ratio");
            c.lhs = r.max_ratio;
            c.rhs = g ? *g : r.max_ratio;
            c.err = c.lhs / c.rhs - 1;
            c.tolerance = GoldenStore::kRegressionFactor - 1;
            c.tolerance_source = g ? "golden:sieve." + check + ".max_ratio" : "recorded";
            c.status = c.err <= c.tolerance ? CheckStatus::pass : CheckStatus::fail;
            c.note = std::to_string(r.trials) + " trials, worst trial " + std::to_string(r.worst_trial) +
                     ", mean ratio " + fmt(r.mean_ratio, 6);
        });
    }
    s.run("homogeneity", [&](Check& c) {
        double worst = 0.0;
        for (auto v : {SieveVariant::multiplicative, SieveVariant::additive}) {
            auto a = trial_coefficients(tc.N, tc.seed, 0);
            auto b = a;
            for (auto& x : b) x *= cplx(-2.5, 1.5);
            double ra = gallagher_lhs(a, tc.B, tc.T, tc.C, v) / gallagher_rhs(a, tc.B, tc.T, tc.C, v);
            double rb = gallagher_lhs(b, tc.B, tc.T, tc.C, v) / gallagher_rhs(b, tc.B, tc.T, tc.C, v);
            worst = std::max(worst, std::abs(ra - rb) / ra);
        }
        Suite::bound(c, worst, 0.0, worst, s.tol("homogeneity", 1e-10));
    });
    s.run("conversion", [&](Check& c) {
        const int M = 32;
        auto all = random_coefficients(2 * M, s.cfg().seed);
        ExpCoefficients b;
        for (int m = M + 1; m <= 2 * M; ++m) b.set(m, all.values.at(m));
        auto r = conversion_check(b, M, 16.0, eps);
        c.lhs = r.mult_lhs;
        c.rhs = r.mult_rhs;
        c.err = r.mult_ratio;
        c.tolerance_source = "golden";
        c.fitted_constants["mult_ratio"] = r.mult_ratio;
        c.fitted_constants["add_ratio"] = r.add_ratio;
        c.status = std::isfinite(r.mult_ratio) && std::isfinite(r.add_ratio) ? CheckStatus::pass : CheckStatus::fail;
        c.note = "M = 32, T = 16";
    });
    s.run("moment_ab", [&](Check& c) {
        FamilyTuple fam;
        fam.r = 1.0;
        fam.s = 3.0;
        fam.d = 1.5;
        fam.q = 400.0;
        auto r = moment_ab(1, 3, fam, 12, random_coefficients(12, s.cfg().seed), 50.0, eps);
        c.lhs = r.value;
        c.rhs = r.bound;
        c.err = r.fitted_constant;
        c.tolerance_source = "golden";
        c.fitted_constants["constant"] = r.fitted_constant;
        c.status = std::isfinite(r.fitted_constant) ? CheckStatus::pass : CheckStatus::fail;
    });
    s.run("small_a", [&](Check& c) {
        FamilyTuple fam;
        fam.r = 1.0;
        fam.s = 3.0;
        fam.d = 1.5;
        fam.q = 400.0;
        auto r = small_a_sweep(fam, 200, 50.0, s.cfg().seed, eps);
        c.lhs = r.fitted_constant;
        c.err = r.fitted_constant;
        c.tolerance_source = "golden";
        c.fitted_constants["constant"] = r.fitted_constant;
        c.status = r.cells > 0 && std::isfinite(r.fitted_constant) ? CheckStatus::pass : CheckStatus::fail;
        c.note = std::to_string(r.cells) + " (A, B) cells";
    });
}

void suite_kuznetsov(Suite& s) {
    const double D = s.param("D", 3.0);
    std::vector<double> errs;
    // m = n and c with x = 4 pi m / c close to 2S, so R = x / (2S) is about 1
    for (auto [S, m, c_mod] : {std::tuple{15.0, 5L, 2L}, {30.0, 5L, 1L}, {60.0, 10L, 1L}}) {
        const std::string check = "kmncalc_S" + std::to_string(static_cast<int>(S));
        s.run(check, [&, S, m, c_mod](Check& c) {
            SpectralWeight w{S, D};
            const double x = 4 * std::numbers::pi * m / c_mod;
            auto r = verify_kmncalc(m, m, c_mod, w, x / (2 * S));
            Suite::bound(c, std::abs(r.H), std::abs(r.H_plus + r.H_minus), r.rel_err, s.tol("kmncalc", 1e-2));
            errs.push_back(r.rel_err);
            c.note = "m = n = " + std::to_string(m) + ", c = " + std::to_string(c_mod) +
                     ", x = 2SR; values in units of the weight peak; abs err " + fmt(r.abs_err);
            if (S == 30.0) c.fitted_constants["h0_constant"] = r.H0_constant;
            if (std::abs(r.H_minus - std::conj(r.H_plus)) > 1e-12) {
                c.status = CheckStatus::fail;
                c.note += "; H- != conj(H+)";
            }
        });
    }
    s.run("kmncalc_trend", [&](Check& c) {
        if (errs.size() != 3) throw UsageError("missing kmncalc runs");
        double worst = std::max(errs[1] / errs[0], errs[2] / errs[1]);
        c.lhs = errs.front();
        c.rhs = errs.back();
        c.err = worst;
        c.tolerance = 1.0;
        c.tolerance_source = "default";
        c.status = worst < 1.0 ? CheckStatus::pass : CheckStatus::fail;
        c.note = "largest ratio of successive errors over S/D = 5, 10, 20";
    });
    s.run("small_x", [&](Check& c) {
        SpectralWeight w{30.0, D};
        auto h = transform_H(w.S / 10, 1, 1, w);
        double bound = 1e-10 * w.S * w.D;
        Suite::bound(c, std::abs(h.value), bound, std::abs(h.value) / (w.S * w.D), s.tol("small_x", 1e-10));
        c.note = "|H(S/10)| / (SD) in units of the weight peak";
    });
    s.run("khat_decay", [&](Check& c) {
        SpectralWeight w{30.0, D};
        double c6 = khat_decay_constant(w);
        c.lhs = c6;
        c.tolerance_source = "golden";
        c.fitted_constants["c6"] = c6;
        c.status = std::isfinite(c6) ? CheckStatus::pass : CheckStatus::fail;
    });
}

void suite_voronoi(Suite& s) {
    const PrecisionMode mode = s.cfg().precision;
    s.run("psi_contour", [&](Check& c) {
        TestFunctionPsi psi{1.0, 2.0};
        double worst = 0.0;
        for (LanglandsTriple t : {LanglandsTriple{0, 0, 0}, make_triple(0.7, 0.2, -0.9), make_triple(27.6, 0, -27.6)}) {
            VoronoiTransform a(t, psi, -0.5, 1e-10, mode), b(t, psi, 0.5, 1e-10, mode);
            for (double x : {0.05, 0.3, 1.0, 3.0})
                for (int k : {0, 1}) worst = std::max(worst, std::abs(a.psi_k(x, k) - b.psi_k(x, k)));
        }
        Suite::bound(c, worst, 0.0, worst, s.tol("psi_contour", 1e-8));
        c.note = "sigma = -1/2 against 1/2, absolute";
    });
    s.run("mellin_round_trip", [&](Check& c) {
        TestFunctionPsi psi{1.0, 2.0};
        double worst = 0.0;
        for (double sigma : {-0.3, 0.5})
            for (double x : {1.1, 1.3, 1.414, 1.6, 1.9})
                worst = std::max(worst, std::abs(mellin_inverse(psi, x, sigma).value - psi(x)));
        Suite::bound(c, worst, 0.0, worst, s.tol("mellin_round_trip", 1e-6));
    });
    s.run("gamma_unitary", [&](Check& c) {
        LanglandsTriple t = make_triple(6.0, 1.5, -7.5);
        std::mt19937_64 rng(s.cfg().seed);
        std::uniform_real_distribution<double> U(-60.0, 60.0);
        double worst = 0.0;
        for (double T0 : {t.alpha, t.beta, t.gamma})
            for (int i = 0; i < 50; ++i) {
                double tt = U(rng);
                for (int k : {0, 1}) worst = std::max(worst, std::abs(std::norm(gamma_unitary_factor(tt, -0.5, t, T0, k)) - 1));
            }
        Suite::bound(c, worst, 0.0, worst, s.tol("gamma_unitary", 1e-10));
        c.note = "| |G|^2 - 1 | over 50 t in [-60, 60], three T0";
    });

    const GL3CoefficientTable table = sym2_coeffs(load_form(s.cfg(), "maass_even_13.78.txt"), 600);
    const TestFunctionPsi psi{s.param("psi_lo", 30.0), s.param("psi_hi", 300.0)};
    for (auto [m, c_mod, cap] : {std::tuple{1L, 2L, 300L}, {1L, 3L, 200L}, {2L, 3L, 100L}}) {
        const std::string check = "identity_m" + std::to_string(m) + "_c" + std::to_string(c_mod);
        s.run(check, [&, m, c_mod, cap](Check& c) {
            const Tolerance rel = s.tol("identity", 1e-3), tail = s.tol("tail", 1e-4);
            auto r = verify_voronoi(table, psi, m, 1, c_mod, cap, mode);
            std::string used = precision_name(mode);
            if ((r.rel_err > rel.value || r.tail_bound >= tail.value) && mode == PrecisionMode::binary64) {
                r = verify_voronoi(table, psi, m, 1, c_mod, cap, PrecisionMode::extended);
                used = "extended (fallback)";
            }
            Suite::bound(c, std::abs(r.lhs), std::abs(r.rhs), r.rel_err, rel);
            if (!(r.tail_bound < tail.value)) c.status = CheckStatus::fail;
            c.note = "d = 1, n2 cap " + std::to_string(cap) + ", tail bound " + fmt(r.tail_bound) + " (< " +
                     fmt(tail.value) + ", " + tail.source + "), " + used;
        });
    }

    VoronoiParams p;
    p.triple = make_triple(3.0, 1.0, -4.0);
    p.T0 = p.triple.alpha;
    const EtaWeight eta;
    s.run("phi_truncation", [&](Check& c) {
        auto fit = phi_truncation_fit(p, eta, 0.5, {0.1, 1, 10, 100, 1e3, 1e4, 1e6}, s.cfg().epsilon);
        c.lhs = fit.constant;
        c.rhs = fit.ratios.back();
        c.tolerance_source = "golden";
        c.fitted_constants["constant"] = fit.constant;
        c.status = std::isfinite(fit.constant) ? CheckStatus::pass : CheckStatus::fail;
        c.note = "max over x of |Phi_k| / (U (U+T) (U+V) T^eps / (xM))^sigma, sigma = 4";
    });
    s.run("phi_bilinear", [&](Check& c) {
        auto r = phi_bilinear_check(random_coefficients(6, s.cfg().seed), 2.0, p, eta, s.cfg().epsilon);
        c.lhs = r.lhs;
        c.rhs = r.rhs;
        c.err = r.ratio;
        c.tolerance_source = "golden";
        c.fitted_constants["ratio"] = r.ratio;
        c.status = std::isfinite(r.ratio) ? CheckStatus::pass : CheckStatus::fail;
        c.note = "six random coefficients over c = 2";
    });
}

void suite_families(Suite& s) {
    s.run("wf_modes", [&](Check& c) {
        std::mt19937_64 rng(s.cfg().seed);
        double worst = 0.0, worst_min = 0.0;
        for (int k = 0; k < 20; ++k) {
            LanglandsTriple t = random_triple(rng, 60.0, true);
            const double T = t.T();
            double minimum = 1e300;
            for (int i = 0; i < 200; ++i)
                for (int j = 0; j < 200; ++j) {
                    double X = -2 * T + 4 * T * i / 199, Y = -2 * T + 4 * T * j / 199;
                    double a = wf_exponent_xy(t, X, Y, WfMode::closed);
                    worst = std::max(worst, std::abs(a - wf_exponent_xy(t, X, Y, WfMode::table)));
                    minimum = std::min(minimum, a);
                }
            worst_min = std::max(worst_min, std::abs(minimum));
        }
        Suite::bound(c, worst, worst_min, std::max(worst, worst_min), s.tol("wf_modes", 1e-9));
        c.note = "20 triples x 200 x 200 grid; lhs = closed vs table, rhs = |grid minimum|";
    });
    s.run("partition", [&](Check& c) {
        long missed = 0, points = 0;
        double worst = 1.0, allowed = 1e300;
        for (LanglandsTriple t : {LanglandsTriple{100, 20, -120}, LanglandsTriple{60, 5, -65}, LanglandsTriple{40, 30, -70},
                                  LanglandsTriple{300, 40, -340}, LanglandsTriple{200, 50, -250}}) {
            auto boxes = enumerate_partition(t);
            allowed = std::min(allowed, partition_tolerance(t));
            for (int X = int(std::ceil(t.beta + 1)); X <= int(std::floor(t.alpha - 1)); ++X)
                for (int Y = int(std::ceil(t.gamma + 1)); Y <= int(std::floor(t.beta - 1)); ++Y) {
                    ++points;
                    missed += std::none_of(boxes.begin(), boxes.end(), [&](const ConductorBox& b) { return b.contains(X, Y); });
                }
            for (const auto& b : boxes)
                for (double X : {b.x1, b.x1 + b.u_width})
                    for (double Y : {b.y1, b.y1 + b.v_width}) {
                        double r = b.q_value / conductor_q(t, X) / conductor_q(t, Y);
                        worst = std::max({worst, r, 1 / r});
                    }
        }
        c.lhs = double(points - missed) / points;
        c.rhs = worst;
        c.err = worst;
        c.tolerance = allowed;
        c.tolerance_source = "default";
        c.status = missed == 0 && worst <= allowed ? CheckStatus::pass : CheckStatus::fail;
        c.note = "5 triples, T <= 500; lhs = lattice coverage, rhs = worst q ratio on box corners";
    });
    s.run("langlands_round_trip", [&](Check& c) {
        std::mt19937_64 rng(s.cfg().seed);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            LanglandsTriple t = random_triple(rng, 50.0);
            LanglandsTriple b = to_langlands(from_langlands(t));
            worst = std::max({worst, std::abs(b.alpha - t.alpha), std::abs(b.beta - t.beta), std::abs(b.gamma - t.gamma)});
        }
        Suite::bound(c, worst, 0.0, worst, s.tol("langlands_round_trip", 1e-12));
    });
    const LanglandsTriple t =
        make_triple(s.param("alpha", 100.0), s.param("beta", 20.0), s.param("gamma", -120.0));
    s.run("families", [&](Check& c) {
        auto fams = enumerate_families(t);
        const double T = t.T();
        long bad = 0;
        for (const auto& f : fams) {
            bool ok = 1 <= f.r && f.r <= f.d && f.d <= f.s && f.s <= kFamilyScaleConstant * T;
            if (f.t0 == t.gamma) ok = ok && f.s >= T / 8 && f.s <= 8 * T;
            bad += !ok;
        }
        auto fit = fit_family_constants(t, fams);
        c.lhs = double(fams.size());
        c.rhs = double(bad);
        c.err = double(bad);
        c.tolerance_source = "default";
        c.status = !fams.empty() && bad == 0 ? CheckStatus::pass : CheckStatus::fail;
        c.fitted_constants["count_over_log2T"] = fit.count_over_log2T;
        c.fitted_constants["max_s_ratio"] = fit.max_s_ratio;
        c.fitted_constants["max_d_ratio"] = fit.max_d_ratio;
        c.fitted_constants["max_q_ratio"] = fit.max_q_ratio;
        c.note = "lhs = tuples, rhs = tuples violating 1 <= R <= D <= S <= T (S in [T/8, 8T] when T0 = gamma)";
    });
}

void suite_moment(Suite& s) {
    const MaassFormGL2 form = load_form(s.cfg(), "maass_even_13.78.txt");
    const auto kappa = rankin_selberg_kappa({0.4, 0.1, -0.5}, form.t_j);
    s.run("afe_tail", [&](Check& c) {
        const double q = analytic_conductor(kappa, 0.0);
        double worst = 0.0;
        for (double f : {1.0, 2.0, 4.0, 10.0}) worst = std::max(worst, std::abs(afe_v_weight(kappa, 0.0, f * std::pow(q, 0.6))));
        Suite::bound(c, worst, 0.0, worst, s.tol("afe_tail", 1e-8));
        c.note = "max |V(x)| over x >= q^0.6, q = " + fmt(q) + "; degree-6 Rankin-Selberg sample";
    });
    s.run("afe_small_x", [&](Check& c) {
        cplx v = afe_v_weight(kappa, 0.0, 1e-6);
        Suite::bound(c, std::abs(v), 1.0, std::abs(v - 1.0), s.tol("afe_small_x", 1e-4));
        c.note = "|V(1e-6) - 1|";
    });

    const GL3CoefficientTable table = sym2_coeffs(form, 600);
    s.run("hecke", [&](Check& c) {
        double worst = 0.0;
        for (long m = 1; m <= 24; ++m)
            for (long n = 1; m * n <= 600; ++n) worst = std::max(worst, gl3_hecke_check(table, m, n).with_mobius);
        Suite::bound(c, worst, 0.0, worst, s.tol("hecke", 1e-9));
        c.note = "GL3 Hecke relation with mu(d) on the symmetric square, mn <= 600";
    });
    s.run("sym2_ramanujan", [&](Check& c) {
        double worst = 0.0;
        for (const auto& [p, lam] : form.lambda_p)
            if (std::abs(lam) <= 2) worst = std::max(worst, std::abs(table(1, p)));
        c.lhs = worst;
        c.rhs = 3.0;
        c.err = std::max(0.0, worst - 3.0);
        c.tolerance = 1e-12;
        c.tolerance_source = "default";
        c.status = c.err <= c.tolerance ? CheckStatus::pass : CheckStatus::fail;
    });
    s.run("molteni", [&](Check& c) {
        double r = molteni_ratio(table, {10, 20, 50, 100, 200, 400, 600});
        c.lhs = r;
        c.tolerance_source = "golden";
        c.fitted_constants["ratio"] = r;
        c.status = std::isfinite(r) ? CheckStatus::pass : CheckStatus::fail;
    });
    s.run("rs_regroup", [&](Check& c) {
        auto w = afe_window(2000.0, s.cfg().epsilon);
        auto lam = coefficients_of(form);
        const cplx sp(0.5, 2.0);
        cplx regrouped = 0.0;
        for (long n = 1; n <= w.support_max(); ++n)
            regrouped += rs_coefficient(table, lam, n) * w(double(n)) * std::exp(-sp * std::log(double(n)));
        cplx direct = rs_dirichlet(table, form, sp, w);
        double err = std::abs(direct - regrouped) / std::max(1.0, std::abs(direct));
        Suite::bound(c, std::abs(direct), std::abs(regrouped), err, s.tol("rs_regroup", 1e-10));
    });
    s.run("moment", [&](Check& c) {
        auto fams = enumerate_families(table.triple());
        const long k = s.param("family_index", 2L);
        if (k < 0 || k >= static_cast<long>(fams.size())) throw UsageError("family index out of range");
        std::vector<MaassFormGL2> forms = ingest_maass_data(s.cfg().data_dir() / "maass");
        auto w = afe_window(s.param("q_cap", 400.0), s.cfg().epsilon);
        auto r = moment_spectral(fams[k], forms, table, w);
        c.lhs = r.value;
        c.rhs = r.comparison;
        c.err = r.comparison > 0 ? r.value / r.comparison : 0.0;
        c.tolerance_source = "golden";
        c.fitted_constants["ratio"] = c.err;
        c.status = r.warning.empty() ? CheckStatus::pass : CheckStatus::warn;
        c.note = "family " + std::to_string(k) + " (" + fams[k].case_label + "), " + std::to_string(r.forms_used) +
                 " form(s) in [S, S+D]" + (r.warning.empty() ? "" : "; " + r.warning);
    });
}

using SuiteFn = void (*)(Suite&);

SuiteFn suite_fn(const std::string& name) {
    if (name == "stade") return suite_stade;
    if (name == "kloosterman") return suite_kloosterman;
    if (name == "sieve") return suite_sieve;
    if (name == "kuznetsov") return suite_kuznetsov;
    if (name == "voronoi") return suite_voronoi;
    if (name == "families") return suite_families;
    if (name == "moment") return suite_moment;
    throw UsageError("unknown suite " + name);
}

}  // namespace

// ---------------------------------------------------------------------------------------------

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> s{"stade", "kloosterman", "sieve", "kuznetsov", "voronoi", "families", "moment"};
    return s;
}

void RunConfig::validate() const {
    for (const auto& s : suites)
        if (!is_known_suite(s)) throw UsageError("unknown suite " + s);
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw UsageError("epsilon must lie in (0, 0.5)");
    for (const auto& [k, v] : params) {
        if (!is_tolerance_key(k)) continue;
        double x;
        if (!parse_number(v, x) || !std::isfinite(x) || x <= 0.0)
            throw UsageError("tolerance " + k + " must be a positive number, got '" + v + "'");
    }
}

double RunConfig::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    double x;
    if (!parse_number(it->second, x)) throw UsageError("parameter " + key + " is not a number");
    return x;
}

long RunConfig::param(const std::string& key, long fallback) const {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    double x;
    if (!parse_number(it->second, x) || x != std::floor(x)) throw UsageError("parameter " + key + " is not an integer");
    return static_cast<long>(x);
}

std::filesystem::path RunConfig::data_dir() const {
    if (!data_paths.empty()) return data_paths.front();
    if (const char* env = std::getenv("GL3LAB_DATA")) return env;
    return GL3LAB_DATA_DIR;
}

RunConfig parse_config(const std::string& text, RunConfig base) {
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", no);
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", no);
        double x;
        if (key == "suites") {
            base.suites = split_list(value);
        } else if (key == "epsilon") {
            if (!parse_number(value, x)) throw ParseError("epsilon is not a number", no);
            base.epsilon = x;
        } else if (key == "seed") {
            if (!parse_number(value, x) || x < 0 || x != std::floor(x)) throw ParseError("seed is not a nonnegative integer", no);
            base.seed = static_cast<std::uint64_t>(x);
        } else if (key == "data") {
            base.data_paths.clear();
            for (const auto& p : split_list(value)) base.data_paths.emplace_back(p);
        } else if (key == "output") {
            base.output = value;
        } else if (key == "json") {
            if (value != "true" && value != "false") throw ParseError("json must be true or false", no);
            base.emit_machine_readable = value == "true";
        } else {
            size_t dot = key.find('.');
            if (dot == std::string::npos) throw ParseError("unknown key " + key, no);
            if (!is_known_suite(key.substr(0, dot))) throw ParseError("unknown suite in key " + key, no);
            base.params[key] = value;
        }
    }
    return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

PrecisionMode precision_from_env() {
    const char* v = std::getenv("GL3LAB_PRECISION");
    if (!v || std::string(v).empty() || std::string(v) == "double") return PrecisionMode::binary64;
    if (std::string(v) == "extended") return PrecisionMode::extended;
    throw UsageError("GL3LAB_PRECISION must be double or extended, got '" + std::string(v) + "'");
}

std::string precision_name(PrecisionMode m) { return m == PrecisionMode::extended ? "extended" : "double"; }

std::string status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        default: return "warn";
    }
}

int VerificationReport::exit_code() const {
    return std::any_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == CheckStatus::fail; }) ? 1 : 0;
}

GoldenStore GoldenStore::load(const std::filesystem::path& path) {
    GoldenStore g;
    std::ifstream in(path);
    if (!in) return g;
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
    for (auto it = doc.begin(); it != doc.end(); ++it)
        g.values_[it.key()] = {from_number(it.value().at("value")), it.value().value("note", "")};
    return g;
}

void GoldenStore::save(const std::filesystem::path& path) const {
    json doc = json::object();
    for (const auto& [k, v] : values_) doc[k] = {{"value", number(v.first)}, {"note", v.second}};
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

std::optional<double> GoldenStore::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second.first;
}

void GoldenStore::set(const std::string& key, double value, const std::string& note) { values_[key] = {value, note}; }

void GoldenStore::merge(const GoldenStore& o) {
    for (const auto& [k, v] : o.values_) values_[k] = v;
}

VerificationReport run_suites(const RunConfig& cfg, const GoldenStore& goldens, GoldenStore* record) {
    cfg.validate();
    VerificationReport rep;
    for (size_t i = 0; i < cfg.suites.size(); ++i) rep.suite += (i ? "," : "") + cfg.suites[i];
    rep.environment.precision_mode = precision_name(cfg.precision);
    rep.environment.seed = cfg.seed;

    // each suite records into its own store; merged in suite order afterwards
    std::vector<GoldenStore> recs(cfg.suites.size());
    std::vector<std::future<std::vector<Check>>> jobs;
    for (size_t i = 0; i < cfg.suites.size(); ++i) {
        SuiteFn fn = suite_fn(cfg.suites[i]);
        GoldenStore* r = record ? &recs[i] : nullptr;
        jobs.push_back(std::async(std::launch::async, [&cfg, &goldens, fn, r, name = cfg.suites[i]] {
            Suite s(name, cfg, goldens, r);
            try {
                fn(s);
            } catch (const Error& e) {
                s.run("setup", [&](Check&) { throw IoError(e.what()); });
            }
            return s.take();
        }));
    }
    for (size_t i = 0; i < jobs.size(); ++i) {
        auto checks = jobs[i].get();
        rep.checks.insert(rep.checks.end(), checks.begin(), checks.end());
    }
    if (record)
        for (const auto& r : recs) record->merge(r);
    return rep;
}

std::string emit_report(const VerificationReport& rep, ReportFormat format, bool timings) {
    if (format == ReportFormat::machine) {
        json checks = json::array();
        for (const auto& c : rep.checks) {
            json fc = json::object();
            for (const auto& [k, v] : c.fitted_constants) fc[k] = number(v);
            json j = {{"name", c.name},
                      {"status", status_name(c.status)},
                      {"lhs", number(c.lhs)},
                      {"rhs", number(c.rhs)},
                      {"err", number(c.err)},
                      {"tolerance", number(c.tolerance)},
                      {"tolerance_source", c.tolerance_source},
                      {"fitted_constants", fc},
                      {"note", c.note}};
            if (timings) j["runtime_s"] = number(c.runtime_s);
            checks.push_back(j);
        }
        json doc = {{"suite", rep.suite},
                    {"checks", checks},
                    {"environment",
                     {{"version", rep.environment.version},
                      {"precision_mode", rep.environment.precision_mode},
                      {"seed", rep.environment.seed}}}};
        return doc.dump(2) + "\n";
    }

    std::ostringstream o;
    o << "gl3lab " << rep.environment.version << "  suites: " << (rep.suite.empty() ? "(none)" : rep.suite)
      << "  seed " << rep.environment.seed << "  precision " << rep.environment.precision_mode << "\n";
    size_t w = 5;
    for (const auto& c : rep.checks) w = std::max(w, c.name.size());
    o << std::left << std::setw(int(w) + 2) << "check" << std::setw(6) << "status" << std::right << std::setw(13)
      << "lhs" << std::setw(13) << "rhs" << std::setw(11) << "err" << std::setw(10) << "tol";
    if (timings) o << std::setw(10) << "time[s]";
    o << "  source\n";
    for (const auto& c : rep.checks) {
        o << std::left << std::setw(int(w) + 2) << c.name << std::setw(6) << status_name(c.status) << std::right
          << std::setw(13) << fmt(c.lhs, 6) << std::setw(13) << fmt(c.rhs, 6) << std::setw(11) << fmt(c.err, 3)
          << std::setw(10) << fmt(c.tolerance, 3);
        if (timings) o << std::setw(10) << std::fixed << std::setprecision(2) << c.runtime_s << std::defaultfloat;
        o << "  " << c.tolerance_source << "\n";
        for (const auto& [k, v] : c.fitted_constants) o << "    " << k << " = " << fmt(v, 8) << "\n";
        if (!c.note.empty()) o << "    " << c.note << "\n";
    }
    return o.str();
}

VerificationReport parse_machine_report(const std::string& text) {
    VerificationReport rep;
    try {
        json doc = json::parse(text);
        rep.suite = doc.at("suite").get<std::string>();
        const json& env = doc.at("environment");
        rep.environment.version = env.at("version").get<std::string>();
        rep.environment.precision_mode = env.at("precision_mode").get<std::string>();
        rep.environment.seed = env.at("seed").get<std::uint64_t>();
        for (const json& j : doc.at("checks")) {
            Check c;
            c.name = j.at("name").get<std::string>();
            c.status = status_from(j.at("status").get<std::string>());
            c.lhs = from_number(j.at("lhs"));
            c.rhs = from_number(j.at("rhs"));
            c.err = from_number(j.at("err"));
            c.tolerance = from_number(j.at("tolerance"));
            c.tolerance_source = j.at("tolerance_source").get<std::string>();
            for (auto it = j.at("fitted_constants").begin(); it != j.at("fitted_constants").end(); ++it)
                c.fitted_constants[it.key()] = from_number(it.value());
            if (j.contains("runtime_s")) c.runtime_s = from_number(j.at("runtime_s"));
            c.note = j.at("note").get<std::string>();
            rep.checks.push_back(std::move(c));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("machine report: ") + e.what(), 0);
    }
    return rep;
}

}  // namespace gl3lab
