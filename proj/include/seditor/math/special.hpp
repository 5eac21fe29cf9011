#pragma once

namespace seditor::math {

// Gamma-family helpers for the Beta policy head. Hand-rolled because the
// implicit sampling gradients need the regularized incomplete beta and
// its inverse at double precision, and no dependency of this project
// ships them.

double digamma(double x);   // d/dx ln Gamma(x), x > 0
double trigamma(double x);  // d^2/dx^2 ln Gamma(x), x > 0

double lbeta(double a, double b);  // ln B(a, b)

// Regularized incomplete beta I_x(a, b), the Beta(a, b) CDF at x in [0, 1].
double reg_inc_beta(double a, double b, double x);

// Inverse CDF: the x with I_x(a, b) = p. Newton iteration with a
// bisection bracket; |I_x - p| converges below 1e-13 for a, b >= 1.
double reg_inc_beta_inv(double a, double b, double p);

double beta_pdf(double a, double b, double x);
double beta_log_pdf(double a, double b, double x);

// Differential entropy of Beta(a, b) and its partial derivatives.
double beta_entropy(double a, double b);
double beta_entropy_grad_a(double a, double b);
double beta_entropy_grad_b(double a, double b);

// Central-difference partials of the CDF in its shape parameters,
// used by the implicit sampling gradient dz/da = -(dF/da) / pdf(z).
// Step 1e-5 balances truncation against cancellation in double precision.
double inc_beta_grad_a(double a, double b, double x);
double inc_beta_grad_b(double a, double b, double x);

}  // namespace seditor::math
