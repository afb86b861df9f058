#pragma once

#include <functional>

// Reference values computed without touching the library's Gamma code.
namespace oracle {

// n! in long double.
long double factorial(int n);

// ln Gamma(n + 1/2) from (2n)! sqrt(pi) / (4^n n!).
double log_gamma_half_integer(int n);

// Integral of f over [a, b] (either bound may be infinite), adaptive
// Gauss-Kronrod.
double integrate(const std::function<double(double)>& f, double a, double b);

// E|g|^alpha for the density exp(-|t|^p) / Z, Z from quadrature as well.
double abs_moment(double p, double alpha);

// E h(x, y) for (x, y) uniform on the cross-polytope |x| + |y| <= 1.
double cross_polytope_mean(const std::function<double(double, double)>& h);

// Moments of the uniform distribution on the Euclidean ball B_2^n.
double euclidean_ball_x1_sq(int n);        // E x1^2 = 1/(n+2)
double euclidean_ball_x1_sq_x2_sq(int n);  // E x1^2 x2^2 = 1/((n+2)(n+4))

// E |sum of n fair signs| / sqrt(n) by exact enumeration.
double binomial_walk_abs_mean(int n);

}  // namespace oracle
