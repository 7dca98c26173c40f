#pragma once

// Large-barrier behaviour of the running-maximum tail. Everything here is
// driven by the exponent phi(u) = lambda*u - t0(u) - u*log(t0/(t0-1)) and its
// interior maximum at u0 = 1/(4 sinh^2(lambda/2)), where the Laplace contour
// through the saddle of the Bromwich integrand localizes.

#include "types.hpp"

namespace cirmax {

struct SaddleData {
    double u0;
    double phi_u0;
    double phi2_u0;      // phi''(u0) = 1/(u0 sqrt(1+4 u0))
    double root1p4u0;    // sqrt(1+4 u0) = coth(lambda/2)
    double C1;           // prefactor of the y -> 0 tail
    double C2;           // prefactor of the fixed-y tail; NaN when y == 0
};

struct TailValue {
    double value;        // exp(log_value), honest under/overflow
    double log_value;
};

enum class AsympMode { small_y, fixed_y };

// phi(u) for u > 0.
double phi(double u, double lambda);

// Saddle location and tail prefactors. y enters only through C2.
SaddleData saddle_data(double lambda, double b, double y = 0.0);

// Exponent of the fixed-y regime before maximization: x*phi(u) + 2*sqrt(u*x*y).
double chi(double u, double lambda, double x, double y);

// Stationary point of chi in u, bracketed in [u0/2, 2*u0] and polished by
// Newton to relative 1e-12. Returns u0 for y = 0; throws std::runtime_error
// when the bracket holds no root (y too large for the expansion regime).
double solve_u_hat(double lambda, double x, double y);

// C1 * x^{b-1} * e^{x phi(u0)}, valid when y vanishes (or shrinks faster
// than 1/log^2 x as x grows).
TailValue tail_asymp_small_y(double lambda, double b, double x);

// C2 * x^{b/2-3/4} * e^{x phi(u0) + 2 sqrt(y u0 x)}, for fixed y > 0.
TailValue tail_asymp_fixed_y(double lambda, double b, double x, double y);

// Physical-parameter front end: maps to (lambda, b, x, y) and dispatches.
TailValue cir_tail_asymp(const CirParams& p, AsympMode mode);

} // namespace cirmax
