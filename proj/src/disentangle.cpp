#include "tfdkerr/disentangle.hpp"

#include <algorithm>
#include <cmath>

namespace tfdkerr {

SU2Coefficients sector_coefficients(const SystemConfig& config, int mode,
                                    const std::vector<int>& sector_values, double t) {
    config.validate();
    if (mode < 0 || mode >= config.mode_count)
        throw std::invalid_argument("sector_coefficients: bad mode");
    if (static_cast<int>(sector_values.size()) != config.mode_count)
        throw std::invalid_argument("sector_coefficients: need one sector value per mode");
    double chi_term = 0.0;
    for (int j = 0; j < config.mode_count; ++j)
        chi_term += config.chi[mode][j] * double(sector_values[j]);
    SU2Coefficients c;
    c.gamma_plus = c.gamma_minus = Cplx{config.gamma[mode] * t, 0.0};
    c.gamma_3 = Cplx{-config.gamma[mode], -(config.omega[mode] + chi_term)} * t;
    return c;
}

SU2Coefficients sector_coefficients(const SystemConfig& config, int sector_value, double t) {
    return sector_coefficients(config, 0, std::vector<int>{sector_value}, t);
}

namespace {

// sinh(z)/z, stable through z = 0
Cplx sinhc(Cplx z) {
    const Cplx z2 = z * z;
    if (std::abs(z2) < 1e-6)
        return 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0));
    return std::sinh(z) / z;
}

}  // namespace

GaussFactors gauss_factorize(const SU2Coefficients& c) {
    const Cplx lam2 = c.gamma_3 * c.gamma_3 * 0.25 + c.gamma_plus * c.gamma_minus;
    const Cplx lam = std::sqrt(lam2);
    const Cplx ch = std::cosh(lam);
    const Cplx sh = sinhc(lam);
    const Cplx lower_right = ch - 0.5 * c.gamma_3 * sh;  // e^{-Gamma3/2}
    if (!(std::abs(lower_right) > 0.0))
        throw FactorizationSingular("gauss_factorize: lower-right entry of the 2x2 exponential is zero");
    GaussFactors f;
    f.exp_half_Gamma3 = 1.0 / lower_right;
    f.Gamma_plus = c.gamma_plus * sh * f.exp_half_Gamma3;
    f.Gamma_minus = c.gamma_minus * sh * f.exp_half_Gamma3;
    f.lambda = lam;
    return f;
}

namespace detail {

Mat2 mul2(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 expm2(const Mat2& a) {
    double norm = 0.0;
    for (const Cplx& v : a) norm = std::max(norm, std::abs(v));
    int s = 0;
    while (norm > 0.25 && s < 64) {
        norm *= 0.5;
        ++s;
    }
    const double scale = std::ldexp(1.0, -s);
    Mat2 b{a[0] * scale, a[1] * scale, a[2] * scale, a[3] * scale};
    Mat2 sum{1.0, 0.0, 0.0, 1.0};
    Mat2 term{1.0, 0.0, 0.0, 1.0};
    for (int k = 1; k <= 24; ++k) {
        term = mul2(term, b);
        for (Cplx& v : term) v /= double(k);
        for (int i = 0; i < 4; ++i) sum[i] += term[i];
    }
    for (int k = 0; k < s; ++k) sum = mul2(sum, sum);
    return sum;
}

Mat2 exponent_matrix(const SU2Coefficients& c) {
    return {0.5 * c.gamma_3, c.gamma_plus, c.gamma_minus, -0.5 * c.gamma_3};
}

Mat2 reconstruct_product(const GaussFactors& f) {
    const Mat2 up{1.0, f.Gamma_plus, 0.0, 1.0};
    const Mat2 diag{f.exp_half_Gamma3, 0.0, 0.0, 1.0 / f.exp_half_Gamma3};
    const Mat2 down{1.0, 0.0, f.Gamma_minus, 1.0};
    return mul2(mul2(up, diag), down);
}

}  // namespace detail

double fundamental_rep_defect(const SU2Coefficients& c, const GaussFactors& f) {
    const detail::Mat2 lhs = detail::expm2(detail::exponent_matrix(c));
    const detail::Mat2 rhs = detail::reconstruct_product(f);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    return worst;
}

}  // namespace tfdkerr
