#pragma once

#include <array>
#include <stdexcept>

#include "tfdkerr/algebra.hpp"

namespace tfdkerr {

// Coefficients of the exponent g+ S+ + g3 S3 + g- S-, evaluated on one
// excitation sector where the Casimir S0 is the scalar M.
struct SU2Coefficients {
    Cplx gamma_plus{};
    Cplx gamma_minus{};
    Cplx gamma_3{};
};

// Gauss factors of exp(G+ S+) exp(G3 S3) exp(G- S-).  G3 itself is never
// materialized: the propagator only needs integer powers of e^{G3/2}, so that
// entry of the 2x2 exponential is stored directly and no complex logarithm or
// square-root branch is ever taken.
struct GaussFactors {
    Cplx Gamma_plus{};
    Cplx Gamma_minus{};
    Cplx exp_half_Gamma3{};  // e^{Gamma3/2}
    Cplx lambda{};           // principal sqrt of gamma_3^2/4 + gamma_+ gamma_-
};

struct FactorizationSingular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// g+ = g- = gamma_i t, g3 = -(i w_i + gamma_i + i sum_j chi_ij M_j) t, where
// sector_values holds the per-mode S0 eigenvalues M_j of the joint sector.
SU2Coefficients sector_coefficients(const SystemConfig& config, int mode,
                                    const std::vector<int>& sector_values, double t);
// single-mode convenience
SU2Coefficients sector_coefficients(const SystemConfig& config, int sector_value, double t);

// Closed-form 2x2 Gauss decomposition.  With lambda^2 = g3^2/4 + g+ g- the
// spin-1/2 exponential is cosh(lambda) + [[g3/2, g+],[g-, -g3/2]] sinh(lambda)/lambda,
// and the factors are read off its entries:
//   e^{-G3/2} = cosh(lambda) - (g3/2) sinh(lambda)/lambda   (lower-right entry)
//   G+-       = g+- sinh(lambda) / (lambda cosh(lambda) - (g3/2) sinh(lambda))
// cosh and sinh(lambda)/lambda are even, so the branch of lambda is immaterial.
// Throws FactorizationSingular when the lower-right entry is zero (the
// decomposition does not exist there, e.g. nilpotent exponents).
//
// The frequently quoted variant lambda^2 = g3^2 + g+ g-, G3 = ln(lambda / (...))
// belongs to a doubled-S3 normalization and does not satisfy the identity for
// spin-1/2 generators; see the regression test in test_disentangle.cpp.
GaussFactors gauss_factorize(const SU2Coefficients& c);

// Max-norm difference between exp(g+ S+ + g3 S3 + g- S-) (2x2, evaluated by an
// independent scaled Taylor exponential) and the reconstructed product
// exp(G+ S+) exp(G3 S3) exp(G- S-).
double fundamental_rep_defect(const SU2Coefficients& c, const GaussFactors& f);

namespace detail {
// 2x2 complex matrix entries in row-major order {a00, a01, a10, a11}.
using Mat2 = std::array<Cplx, 4>;
Mat2 expm2(const Mat2& a);  // scaling-and-squaring Taylor exponential
Mat2 mul2(const Mat2& a, const Mat2& b);
Mat2 exponent_matrix(const SU2Coefficients& c);        // [[g3/2, g+],[g-, -g3/2]]
Mat2 reconstruct_product(const GaussFactors& f);       // the three-factor product
}  // namespace detail

}  // namespace tfdkerr
