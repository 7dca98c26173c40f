#pragma once

// Bromwich inversion of the hitting-time transform: I(lambda,b,x,y) recovered
// as a vertical-line contour integral of e^{lambda s}/s * M(s,b,y)/M(s,b,x),
// folded onto Im(s) >= 0 by conjugate symmetry. The quadrature runs on the
// log of the integrand with the peak value factored out, so probabilities far
// below the double underflow threshold keep a meaningful log.

#include "types.hpp"

namespace cirmax {

struct ContourSpec {
    double abscissa;   // Re(s) of the contour; all poles lie on (-inf, 0]
    double im_cut;     // initial truncation height of Im(s); extended until the tail is negligible
    double step;       // quadrature panel width
    double tol;        // relative accuracy target

    void validate() const {
        if (!(abscissa > 0) || !(im_cut > 0) || !(step > 0) || !(tol > 0) || !(tol <= 1e-3))
            throw std::invalid_argument(
                "ContourSpec: abscissa, im_cut, step must be positive and tol in (0, 1e-3]");
    }

    // Saddle-adapted defaults: the abscissa tracks u0(lambda)*x (clamped to
    // [min(1, 1/lambda), 650/lambda]) so the folded integrand peaks at the
    // answer's own scale instead of cancelling catastrophically at large x;
    // im_cut starts at min(50*(1+x/lambda), 25*peak_width) and bromwich_I
    // doubles it until the tail estimate drops below tol/10.
    static ContourSpec defaults(const DimensionlessArgs& d, double tol = 1e-9);
};

struct BromwichResult {
    double value;        // clamped to [0,1]
    double log_value;    // log of the raw integral, finite even when value underflows
    double quad_error;   // accumulated quadrature error estimate (relative to the integral)
    double clamp_excess; // how far the raw value fell outside [0,1]; 0 when in range
};

BromwichResult bromwich_I_full(const DimensionlessArgs& d, const ContourSpec& c);

double bromwich_I(const DimensionlessArgs& d, const ContourSpec& c);
double bromwich_I(const DimensionlessArgs& d);

// Max relative asymmetry |F(-v) - conj(F(v))| / |F(v)| over a few probe
// heights; conjugate symmetry is what licenses the fold, so this should sit
// at roundoff level (< 1e-10) always.
double bromwich_fold_residual(const DimensionlessArgs& d, const ContourSpec& c);

enum class CdfMethod { bromwich, eigen, asymp_small_y, asymp_fixed_y };

// P[max of the CIR path over [0,t] >= z], equivalently the CDF in t of the
// first hitting time of level z, by the selected route.
double cir_running_max_cdf(const CirParams& p, CdfMethod method);

} // namespace cirmax
