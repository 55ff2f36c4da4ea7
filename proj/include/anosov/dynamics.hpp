#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anosov/flags.hpp"
#include "anosov/scalars.hpp"
#include "anosov/words.hpp"

namespace anosov {

// g = k * diag(sigma) * kp, sigma descending.
struct CartanData {
    Eigen::VectorXd sigma;
    CMat k, kp;

    double gap(int i = 1) const;  // sigma_{i+1} / sigma_i, 1-based
};

CartanData cartan(const CMat& g);
// Quaternionic input goes through its real model.
CartanData cartan(const Matrix& g);

// Flag of the top singular directions: (k e_1, hyperplane with normal k e_d).
// Both sigma_2/sigma_1 and sigma_d/sigma_{d-1} must be below 1 - gap_tol.
Flag xi_flag(const CMat& g, double gap_tol = 1e-9);
Flag xi_flag(const Matrix& g, double gap_tol = 1e-9);
// Same flag, with the hyperplane read off the top singular direction of the
// normal map.  Use this for long products where sigma_d / sigma_1 is below
// machine precision and the bottom singular vector of g is noise.
Flag xi_flag(const Transform& t, double gap_tol = 1e-9);

struct ProximalData {
    std::vector<double> moduli;  // descending
    double lambda1 = 0, lambda2 = 0, gap = 1;
    bool proximal = false;    // unique eigenvalue of maximal modulus
    bool biproximal = false;  // g and g^-1 both proximal
    std::string status;       // "proximal" or "NotProximal"
    std::optional<ProjPoint> attracting_point;
    std::optional<Flag> plus, minus;  // set when biproximal
};

inline constexpr double kProximalTol = 1e-6;

ProximalData proximal(const CMat& g, double tol = kProximalTol);

// Constant in d(wx, wy) <= c * (s2/s1) / (|<x, n>| |<y, n>|), n the normal of
// the repelling hyperplane of w.  For the chordal metric on unit vectors
// |wx ^ wy| <= s1 s2 |x ^ y| and |wx| >= s1 |<x, n>|, which gives c = 1.
inline constexpr double kChordalComparison = 1.0;

double contraction_bound(const CMat& w, const Flag& x, const Flag& y, double tol = 1e-8);

struct GapRow {
    int length = 0;
    double min_gap = 0;
    std::string argmin_word;
};

struct GapCertificate {
    std::vector<GapRow> rows;
    int L = 0;
    double c = 0, C = 0, intercept = 0, residual_max = 0;
    bool passed = false;
};

// Minimum of log(s1/s2) over reduced words of each length 1..L, then a least
// squares line c*l + b; C is the smallest constant with min_gap(l) >= c l - C.
GapCertificate gap_growth(const FreeRep& rep, int L, int threads = 1);
GapCertificate fit_gap_certificate(std::vector<GapRow> rows);

std::string gap_table_csv(const GapCertificate& cert);

}  // namespace anosov
