#pragma once

#include <array>

#include "rsreg/calculus.hpp"
#include "rsreg/model.hpp"

namespace rsreg {

// Point radius R0 = max{||u||, ||v||, ||b||, ||c||, 1}.
double point_radius(const ProblemInstance& instance, const Evaluation& eval);

// Pairwise radius over two points:
// max{||u(x)||, ||u(y)||, ||v(x)||, ||v(y)||, ||c(x)||, ||c(y)||, ||b||, 1}.
double pairwise_radius(const ProblemInstance& instance, const Evaluation& ex,
                       const Evaluation& ey);

enum class ThresholdMode { Psd, Dominance };

// Minimum admissible w_i^2:
//   psd:       10 r0^4 + l / sigma_min^2   (forces H >= l I)
//   dominance: 200 r0^4 + l / sigma_min^2  (forces 0.9 <= W^2 / (B+W^2) <= 1.1)
double weight_threshold(double r0, double sigma_min_a, double l,
                        ThresholdMode mode);

// Relative eigenvalue slack used by every certificate in this module.
inline constexpr double kEigenSlack = 1e-8;

// True iff lambda_min(h) >= l * (1 - 1e-8); h must be symmetric.
bool certify_psd(const Matrix& h_full, double l);

// True iff every generalized eigenvalue of the pencil (W^2, B + W^2) lies in
// [0.9, 1.1]. Solved by Cholesky-whitening the positive definite side.
bool certify_dominance(const Matrix& b_full, const Vector& w);

// n^4 exp(20 r^2), as an extended real: past the double range the value is
// +inf and comparisons must move to the log domain.
struct CeilingValue {
    double value = 0.0;
    double log_value = 0.0;  // 4 ln n + 20 r^2, always finite
    bool overflowed = false;
    bool r_hypothesis_met = false;  // the stated bound assumes r > 4
};

CeilingValue lipschitz_ceiling(Index n, double r);

// ratio <= ceiling, compared in the log domain when the ceiling overflows.
bool ceiling_holds(double ratio, const CeilingValue& ceiling);

// ||H(x) - H(y)|| / ||x - y||_2 (0 for coincident points). Requires both
// points within radius r and ||A(x-y)||_inf < 0.01.
double empirical_lipschitz(const ProblemInstance& instance, const Vector& x,
                           const Vector& y, double r);

// The five difference terms whose spectral norms control ||H(x) - H(y)||:
//   G1 = v(x)(v(x)∘b)^T - v(y)(v(y)∘b)^T
//   G2 = (v(x)∘b)v(x)^T - (v(y)∘b)v(y)^T
//   G3 = ||b||^2 (v(x)v(x)^T - v(y)v(y)^T)
//   G4 = diag((u(x)+c(x))∘u(x)) - diag((u(y)+c(y))∘u(y))
//   G5 = diag(<c(x),b> u(x)) - diag(<c(y),b> u(y))
struct GTermReport {
    std::array<double, 5> norms{};
    double sum = 0.0;
    double r_inf = 0.0;
    double du_norm = 0.0;  // ||u(x) - u(y)||
    double dc_norm = 0.0;  // ||c(x) - c(y)||
    double part1_ceiling = 0.0;  // 20 R_inf^3 max{du, dc}
    double part2_ceiling = 0.0;  // 100 R_inf^3 r sqrt(n) du
    bool part1_ok = false;
    bool part2_ok = false;
};

GTermReport g_terms(const ProblemInstance& instance, const Vector& x,
                    const Vector& y, double r);

// The per-block spectral sandwiches plus the aggregate +-10 R0^4 bound on B.
// The two rank cross blocks are checked in the spectral-norm form
// ||sym(block)|| <= ||b|| ||v||^2, which is what the aggregate bound uses;
// the literal v v^T sandwich fails for generic b (see tests).
struct BlockBoundReport {
    double rank_cross_norm = 0.0;   // max of ||sym(b12)||, ||sym(b13)||
    double rank_cross_ceiling = 0.0;
    bool holds_rank_cross = false;
    double b14_residual = 0.0;      // || b14 - ||b||^2 v v^T ||
    bool holds_b14 = false;
    double diag1_norm = 0.0;        // max |((u+c)∘u + q)_i|
    double diag1_ceiling = 0.0;     // 1 + (||u||_inf + ||c||_inf)||u||_inf
    bool holds_diag1 = false;
    double diag2_norm = 0.0;        // |<c,b>| ||u||_inf
    double diag2_ceiling = 0.0;     // ||b|| ||c|| ||u||_inf
    bool holds_diag2 = false;
    double b_norm = 0.0;            // ||B||
    double b_ceiling = 0.0;         // 10 R0^4
    bool holds_b = false;

    bool all() const {
        return holds_rank_cross && holds_b14 && holds_diag1 && holds_diag2 &&
               holds_b;
    }
};

BlockBoundReport check_block_bounds(const ProblemInstance& instance,
                                    const Evaluation& eval);

// Summary of one full certificate run at a point (paired with a nearby point
// for the Lipschitz checks). The PSD and dominance entries assert soundness:
// they fail only when the instance weights meet the matching threshold yet
// the certified conclusion does not hold.
struct SpectralCertificate {
    double r0 = 0.0;
    double r_inf = 0.0;
    double sigma_min = 0.0;
    double l = 0.0;
    double m = 0.0;  // Lipschitz ceiling in force (+inf when overflowed)
    // blocks, psd, dominance, lipschitz, g-part1, g-part2
    std::array<bool, 6> passed{};
    bool all() const {
        for (bool p : passed)
            if (!p) return false;
        return true;
    }
};

// Runs the spectral checks at x (with partner y for the pairwise ones).
SpectralCertificate certify_spectral(const ProblemInstance& instance,
                                     const Vector& x, const Vector& y,
                                     double l, double r);

}  // namespace rsreg
