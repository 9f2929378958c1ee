#pragma once

#include <complex>
#include <string>
#include <vector>

namespace gl3lab {

struct SpectralType {
    std::complex<double> nu1;
    std::complex<double> nu2;

    bool tempered(double tol = 1e-12) const;
};

struct LanglandsTriple {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    double T() const;
    double sum() const { return alpha + beta + gamma; }
    // ordered and summing to zero, both to tol
    bool valid(double tol = 1e-12) const;
};

// Sorts three parameters descending. Equal values keep their input order.
LanglandsTriple make_triple(double a, double b, double c);

LanglandsTriple to_langlands(const SpectralType& nu, bool allow_nontempered = false, double tol = 1e-12);
// Solves the defining linear system for (nu1, nu2) given the triple in slot order.
SpectralType from_langlands(const LanglandsTriple& t);

LanglandsTriple dual(const LanglandsTriple& t);

double conductor_q(const LanglandsTriple& t, double z);
double conductor_q2(const LanglandsTriple& t, double tt, double tau);

enum class WfMode { closed, table };

// Stirling exponent W_F(t, tau) with X = t + tau, Y = t - tau. Requires beta >= 0.
double wf_exponent(const LanglandsTriple& t, double tt, double tau, WfMode mode);
double wf_exponent_xy(const LanglandsTriple& t, double X, double Y, WfMode mode);

enum class XSide { above_beta, below_alpha };          // X1 = beta + U or alpha - 2U
enum class YKind { near_beta_small, near_beta_large, near_gamma };  // the three Q cases

struct ConductorBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double u_width = 1.0;
    double v_width = 1.0;
    double q_value = 1.0;
    XSide x_side = XSide::above_beta;
    YKind y_kind = YKind::near_beta_small;
    double u = 1.0;  // ladder values; differ from the widths only when thickened
    double v = 1.0;
    bool thickened = false;

    bool contains(double X, double Y) const;
};

struct PartitionOptions {
    bool thicken_edges = false;  // widen every interval by log^2 T on both sides
};

// Ratio bound between q_value and q_F on box corners. Thickening multiplies it by log^2 T.
double partition_tolerance(const LanglandsTriple& t, const PartitionOptions& opt = {});

std::vector<ConductorBox> enumerate_partition(const LanglandsTriple& t, const PartitionOptions& opt = {});

// The U and V ladders: dyadic from 1, closed off by the cap itself.
std::vector<double> dyadic_ladder(double cap);

struct FamilyTuple {
    std::string case_label;
    double t0 = 0.0;
    double r = 1.0;
    double d = 1.0;
    double s = 1.0;
    double q = 1.0;
    int sign = 1;
    // provenance of the tuple
    double u = 1.0;
    double v = 1.0;
    double x1 = 0.0;
    double y1 = 0.0;
    double family_lo = 0.0;  // spectral window family_lo <= 2 tau <= family_lo + U + V
    double table_d = 1.0;    // the D and S columns before normalization
    double table_s = 1.0;
};

// S <= kFamilyScaleConstant * T holds for every emitted tuple.
inline constexpr double kFamilyScaleConstant = 1.0;

std::vector<FamilyTuple> enumerate_families(const LanglandsTriple& t);
// Single row lookup for given ladder values; empty label when (U, V) fits no row.
std::vector<FamilyTuple> families_for(const LanglandsTriple& t, double U, double V);

struct FamilyFit {
    double count_over_log2T = 0.0;   // number of tuples / log^2 T
    double max_s_ratio = 0.0;        // S_normalized / S_table, worst cases
    double min_s_ratio = 0.0;
    double max_d_ratio = 0.0;
    double min_d_ratio = 0.0;
    double max_q_ratio = 0.0;        // Q / (T^2 D R (S + (a-b)) (1 + (a-b)))
    double min_q_ratio = 0.0;
};

FamilyFit fit_family_constants(const LanglandsTriple& t, const std::vector<FamilyTuple>& fams);

}  // namespace gl3lab
