#pragma once

namespace rinorm {

// log of the upper incomplete gamma Γ(a, z) for real a and z > 0.
// Works for a <= 0 as well (where Γ(a) itself is not defined).
double log_upper_gamma(double a, double z);
// log(Γ(a, z) e^z): no cancellation against z when z is huge
double log_upper_gamma_scaled(double a, double z);

// Lebesgue measure of the unit ball in R^n.
double unit_ball_volume(int n);

// n' = n/(n-1), computed in long double.
double conjugate_dim(int n);

}  // namespace rinorm
