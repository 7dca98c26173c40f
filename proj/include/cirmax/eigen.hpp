#pragma once

// Residue (eigenfunction) route: I(lambda,b,x,y) = 1 + sum of residues at the
// negated a-zeros of M(.,b,x), plus the large-x asymptotics of those zeros
// and coefficients, and the quadrature check of the integral identity that
// proves the zeros real and simple.

#include <complex>
#include <string>
#include <vector>

#include "types.hpp"

namespace cirmax {

struct ZeroTable {
    double b;
    double x;
    std::vector<double> zeros;      // ascending s_k with M(-s_k, b, x) = 0
    std::vector<double> residuals;  // |M(-s_k,b,x)| / (|dM/da| * s_k) after refinement
    double refine_tol;
};

struct ResidueTerm {
    int k;
    double s_k;
    double numerator;   // M(-s_k, b, y)
    double mprime;      // dM/da at a = -s_k, argument x
    double term;        // -e^{-lambda s_k}/s_k * numerator/mprime
};

// First K zeros, bracketed by a sign-change scan whose step follows the local
// zero spacing in both regimes (near-integer gaps when x is large, quadratic
// pi^2 k^2/(4x) gaps when k is large), then polished by safeguarded Newton in
// extended precision. refine_tol bounds the scaled residual of each zero.
ZeroTable find_zeros(double b, double x, int K, double refine_tol = 1e-12);

// The residue series, summed in extended precision: the partial sums cancel
// through as many as twenty decades before settling at I, so every term is
// formed from freshly re-polished zeros at ~30-digit accuracy. K > 0 caps the
// number of terms; K = -1 lets the decay test and the e^{-lambda s} budget
// decide. An existing ZeroTable for the same (b,x) seeds the zero refinement.
double eigen_I(const DimensionlessArgs& d, int K = -1, double tol = 1e-9,
               const ZeroTable* table = nullptr);

std::vector<ResidueTerm> eigen_terms(const DimensionlessArgs& d, int K = -1, double tol = 1e-9,
                                     const ZeroTable* table = nullptr);

// s_k ~ k + x^{b+2k} e^{-x} / (k! Gamma(b+k)), evaluated in log space.
double zero_asymp_large_x(int k, double b, double x);

// Leading large-x form of dM/da at -s_k:
// (-1)^k x^{k+1}/((b)_{k+1} (k+1)) 2F2(1,1; b+k+1, k+2; x); for k = 0 the
// refinement subtracts 2 s_0 sum_{r>=1} H_{r-1} x^r/((b)_r r).
double mprime_asymp(int k, double b, double x, bool refine_k0 = true);

// Leading form of the k-th residue term: 1 for k = 0, else
// (-1)^k M(-k,b,y) x^{k+b} e^{-x} / (e^{lambda k} k k! Gamma(b)).
double summand_asymp(int k, const DimensionlessArgs& d);

// Net k=0 contribution 1 - e^{-lambda s_0}/s_0 * M(-s_0,b,y)/M'(-s_0,b,x)
// in its closed leading form s_0 (lambda + (y/b) 2F2(1,1;b+1,2;y)).
double net_k0_contribution(const DimensionlessArgs& d);

// The same quantity computed directly: 1 + term_0 formed in extended
// precision, since the two parts cancel to ~x/ln(10) digits at large x.
double eigen_net_k0(const DimensionlessArgs& d);

// Relative defect of the integral identity
//   int_0^x t^{b-1} e^{-t} |M(a,b,t)|^2 dt
//     = x^b e^{-x} (M(a,b,x) d/dx M(conj a,b,x) - M(conj a,b,x) d/dx M(a,b,x)) / (conj a - a)
// for Im(a) != 0. The left side uses adaptive quadrature (with a t = tau^{1/b}
// grading when b < 1 removes the endpoint singularity); the right side
// differentiates the defining series termwise.
double wronskian_residual(std::complex<double> a, double b, double x);

// CSV rows "k,s_k,residual" with 17 significant digits.
std::string zero_table_csv(const ZeroTable& t);

} // namespace cirmax
