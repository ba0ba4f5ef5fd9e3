#pragma once

#include "tfdkerr/fock.hpp"

namespace tfdkerr {

// Physical parameters of the simulated systems.  chi must be symmetric;
// all rates non-negative.
struct SystemConfig {
    int mode_count = 1;
    std::vector<double> omega;            // frequency per mode
    std::vector<std::vector<double>> chi; // Kerr couplings, N x N symmetric
    std::vector<double> gamma;            // spin-damping rate per mode
    double kappa = 0.0;                   // oscillator decay (damped-oscillator system)
    double nbar = 0.0;                    // thermal occupation (damped-oscillator system)
    FockCutoff cutoff;

    static SystemConfig single_mode(double omega, double chi, double gamma, FockCutoff cutoff);

    void validate() const;  // throws std::invalid_argument
    bool operator==(const SystemConfig&) const = default;
};

// S0 = a^dag a + a~^dag a~ (Casimir), S3 = (a^dag a - a~^dag a~)/2,
// S+ = a^dag a~, S- = a a~^dag, all for one mode on the N-mode space.
struct SU2Generators {
    int mode = 0;
    SparseOperator S0;
    SparseOperator S3;
    SparseOperator S_plus;
    SparseOperator S_minus;
};

// K3 = (a^dag a + a~^dag a~ + 1)/2, K+ = a^dag a~^dag, K- = a a~,
// K0 = a^dag a - a~^dag a~ (central in this realization).
struct SU11Generators {
    SparseOperator K0;
    SparseOperator K3;
    SparseOperator K_plus;
    SparseOperator K_minus;
};

SU2Generators build_su2(FockCutoff cutoff, int modes, int mode);
SU2Generators build_su2(const SystemConfig& config, int mode);

SU11Generators build_su11(FockCutoff cutoff);
SU11Generators build_su11(const SystemConfig& config);

// -i H for the undamped Kerr medium (single mode), built from the ladder form:
// -i w (a^dag a - a~^dag a~) - i chi [(a^dag a)^2 - (a~^dag a~)^2].
// Note the generator form w S3 + chi S0 S3 carries half these diagonal values;
// see build_damped_su2_hat_H.
SparseOperator build_kerr_hat_H(const SystemConfig& config);

// -i H_D for the damped Kerr medium as a spin system:
//   single mode: -i w S3 - i chi S0 S3 + g (S+ + S- - S3)
//   multimode:   sum_i [ -i w_i S3^i - i sum_j chi_ij S0^j S3^i + g_i (S+^i + S-^i - S3^i) ]
// The optional space override builds the same operator on a larger register
// range (used to make every excitation sector complete).
SparseOperator build_damped_su2_hat_H(const SystemConfig& config);
SparseOperator build_damped_su2_hat_H(const SystemConfig& config, FockCutoff space);

// Generator of the damped linear oscillator (single mode):
//   k(nbar+1)/2 (2 a a~ - a^dag a - a~^dag a~)
// + k nbar/2    (2 a^dag a~^dag - a a^dag - a~ a~^dag)
// - i w (a^dag a - a~^dag a~)
// This ordering is trace-preserving (<I|L = 0).  With as_printed = true the
// variant with a~ a~^dag / a a^dag / a~^dag a~ swapped into the other brackets
// is returned; it differs from the default by exactly (-k/2 + i w) * identity
// and is kept for documentation tests.
SparseOperator build_damped_oscillator_liouvillian(const SystemConfig& config,
                                                   bool as_printed = false);

// Max-norm violation of the bracket relations over interior basis columns
// (both registers <= cutoff-2, where truncation cannot bite).
//
// The exact evaluation recognizes that every generator entry is RN(sqrt(r))
// for an integer radicand r determined by the basis labels, verifies the
// stored values bit-for-bit against that form, and evaluates the brackets in
// radicand arithmetic where conjugate transitions cancel exactly.  If the
// operators are not of that form the plain floating evaluation is returned.
double commutator_defect(const SU2Generators& g);
double commutator_defect(const SU11Generators& g);

// Plain floating-point bracket evaluation (reported alongside the exact one;
// carries ~1e-13 of double rounding at occupations near 30).
double commutator_defect_fp(const SU2Generators& g);
double commutator_defect_fp(const SU11Generators& g);

// Sector bookkeeping (M = m+n per mode), shared by the propagator and oracle.
std::vector<int> sector_values(FockCutoff cutoff);        // 0 .. 2(d-1)
// Smallest register bound that contains every excitation sector present in the
// state's support in full (1 + max sector).
FockCutoff sector_complete_cutoff(const LiouvilleState& state);

// max column-sum defect of <I| L = 0 over interior columns (both registers
// <= cutoff-2); the boundary column leak, a pure truncation artifact, is
// reported separately through boundary_leak if given.
double trace_preservation_defect(const SparseOperator& generator,
                                 double* boundary_leak = nullptr);

}  // namespace tfdkerr
