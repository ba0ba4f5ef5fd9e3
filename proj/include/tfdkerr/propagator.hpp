#pragma once

#include <cstdint>
#include <map>

#include "tfdkerr/disentangle.hpp"

namespace tfdkerr {

// Falling factorial (J)_n = J (J-1) ... (J-n+1), rising (J)^(n) = J (J+1) ...
// (J+n-1); the empty product (n = 0) is 1.  Intended for the small arguments
// of the kernel coefficients; the propagator itself accumulates the square
// roots incrementally instead of forming these products.
std::int64_t pochhammer_falling(std::int64_t j, int n);
std::int64_t pochhammer_rising(std::int64_t j, int n);

struct PropagateOptions {
    bool strict = true;              // no term pruning, fixed reduction order
    double prune_threshold = 1e-18;  // relative to the running output scale
};

// Per joint excitation sector (M_1 .. M_N): the Gauss factors of every mode at
// the requested time, covering the sectors present in a state's support.
struct SectorFactorTable {
    double t = 0.0;
    std::map<std::vector<int>, std::vector<GaussFactors>> factors;
};

SectorFactorTable build_sector_factor_table(const LiouvilleState& state,
                                            const SystemConfig& config, double t);

// Closed-form evolution exp(-i H_D t)|rho> through the disentangled product,
// expanded over number states:
//   sum_r (G-)^r/r! sum_s (G+)^s/s! (e^{G3/2})^(m-n-2r)
//     sqrt[(m)_r (n+1)^(r) (n+r)_s (m-r+1)^(s)] |m-r+s, n+r-s>
// per mode, with factors drawn from the sector table.  Every output label
// stays in the sector of its input label (checked); the output cutoff is
// raised so complete sectors always fit.
LiouvilleState propagate_closed_form(const LiouvilleState& state, const SystemConfig& config,
                                     double t, const PropagateOptions& opts = {});

// N-mode version: per-mode kernels applied sequentially to each initial basis
// term, with the mode coefficients evaluated at the term's joint sector.
LiouvilleState propagate_closed_form_multimode(const LiouvilleState& state,
                                               const SystemConfig& config, double t,
                                               const PropagateOptions& opts = {});

}  // namespace tfdkerr
