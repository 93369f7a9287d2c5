#pragma once

#include "rsreg/model.hpp"

namespace rsreg {

// Target shift delta_b making the loss at the new point coincide with the old
// loss against b - delta_b. The canonical (sign-free) solution is
//   delta_b = alpha(x_t)^{-1} (c(x_next) - c(x_t)).
struct ShiftResult {
    Vector delta_b;
    double reconstruction_residual = 0.0;  // relative gap of the two squared norms
    double bound_value = 0.0;  // e^{r^2}(1 + sqrt(n)||b||) 2 sqrt(n) r e^{r^2} ||Δ||
    bool within_bound = false;
    double alpha_inv_abs = 0.0;  // |alpha(x_t)^{-1}|
    double dc_norm = 0.0;        // ||c(x_next) - c(x_t)||
};

// Shift induced by moving the iterate. Requires alpha(x_t) != 0, both points
// within radius r, and ||A(x_next - x_t)||_inf < 0.01.
ShiftResult shift_in_x(const ProblemInstance& instance, const Vector& x_t,
                       const Vector& x_next, double r);

// Shift induced by replacing A. The two instances must share b, w, and kind;
// requires ||(A_next - A_t) x||_inf < 0.01 and both ||A|| <= r. The bound uses
// the spectral norm of A_next - A_t in place of ||x_next - x_t||.
ShiftResult shift_in_A(const ProblemInstance& instance_t,
                       const ProblemInstance& instance_next, const Vector& x,
                       double r);

}  // namespace rsreg
