#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cirmax {

// Physical CIR parameters dX = (alpha - beta*X)dt + sigma*sqrt(X)dW,
// with horizon t and barrier level z.
struct CirParams {
    double alpha;
    double beta;
    double sigma;
    double x0;
    double t;
    double z;

    void validate() const {
        if (!(alpha > 0) || !(beta > 0) || !(sigma > 0) || !(x0 > 0) || !(t > 0))
            throw std::invalid_argument("CirParams: alpha, beta, sigma, x0, t must be positive");
        if (!std::isfinite(z))
            throw std::invalid_argument("CirParams: z must be finite");
    }
};

// Reduced arguments of the hitting probability I(lambda, b, x, y).
struct DimensionlessArgs {
    double lambda;
    double b;
    double x;
    double y = 0.0;

    void validate() const {
        if (!(lambda > 0) || !(b > 0) || !(x > 0))
            throw std::invalid_argument("DimensionlessArgs: lambda, b, x must be positive");
        if (!(y >= 0) || !(y < x))
            throw std::invalid_argument("DimensionlessArgs: need 0 <= y < x");
    }
};

// lambda = beta*t, b = 2*alpha/sigma^2, x = 2*beta*z/sigma^2, y = 2*beta*X0/sigma^2.
inline DimensionlessArgs to_dimensionless(const CirParams& p) {
    p.validate();
    const double s2 = p.sigma * p.sigma;
    return DimensionlessArgs{p.beta * p.t, 2.0 * p.alpha / s2,
                             2.0 * p.beta * p.z / s2, 2.0 * p.beta * p.x0 / s2};
}

// Nonzero complex number stored as exp(log_magnitude) * exp(i*phase),
// immune to overflow of the linear value. phase normalized to (-pi, pi].
struct LogComplex {
    double log_magnitude;
    double phase;

    static double normalize_phase(double ph) {
        if (!std::isfinite(ph)) return ph;
        ph = std::remainder(ph, 2.0 * M_PI);
        if (ph <= -M_PI) ph += 2.0 * M_PI;
        return ph;
    }

    static LogComplex from(std::complex<double> v) {
        if (v == std::complex<double>(0.0, 0.0))
            throw std::domain_error("LogComplex: zero has no logarithm");
        return LogComplex{std::log(std::abs(v)), std::arg(v)};
    }

    static LogComplex from_log(std::complex<double> log_value) {
        return LogComplex{log_value.real(), normalize_phase(log_value.imag())};
    }

    // May overflow/underflow to inf/0 honestly.
    std::complex<double> value() const {
        const double m = std::exp(log_magnitude);
        return {m * std::cos(phase), m * std::sin(phase)};
    }

    std::complex<double> log() const { return {log_magnitude, phase}; }

    LogComplex operator*(const LogComplex& o) const {
        return LogComplex{log_magnitude + o.log_magnitude, normalize_phase(phase + o.phase)};
    }
    LogComplex operator/(const LogComplex& o) const {
        return LogComplex{log_magnitude - o.log_magnitude, normalize_phase(phase - o.phase)};
    }
};

// Thrown when a series has not entered monotone decay within the term budget.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cirmax
