#pragma once

#include <Eigen/Dense>

#include "tfdkerr/algebra.hpp"

namespace tfdkerr {

// Generator restricted to one joint excitation sector: the ordered basis of
// labels with m_i + n_i = M_i per mode (within the generator's register
// range), and the dense matrix of the generator on it.
struct SectorBlock {
    std::vector<int> sector;
    std::vector<DoubledIndex> basis;
    Eigen::MatrixXcd matrix;
};

struct OracleOptions {
    // Largest dense block the oracle will exponentiate.
    int dense_dimension_cap = 4096;
    // Skip the sector path even for sector-preserving generators.
    bool force_dense = false;
    // Keep the per-point states of grid evolutions.
    bool keep_states = false;
};

struct EvolutionResult {
    LiouvilleState state;                 // final state
    std::vector<double> times;            // diagnostic sample times
    std::vector<Cplx> trace_series;
    std::vector<double> hermiticity_series;
    std::vector<double> norm_series;
    std::vector<LiouvilleState> states;   // filled when keep_states is set
};

// Dense matrix exponential: Pade scaling-and-squaring (Eigen MatrixFunctions,
// Higham's method).  Deterministic, single-threaded.
Eigen::MatrixXcd expm_dense(const Eigen::MatrixXcd& a);

// Sector blocks of a sector-preserving generator for the given joint sectors.
std::vector<SectorBlock> sector_blocks(const SparseOperator& generator,
                                       const std::vector<std::vector<int>>& sectors);

// exp(generator * t)|state> by dense exponentiation of finite blocks.
// Sector-preserving generators use the excitation-sector blocks; anything else
// falls back to the exact partition of the basis into the connected components
// of the sparsity pattern (invariant subspaces of the generator), each
// exponentiated monolithically.  Results agree with the exponential of the
// full truncated matrix to rounding; components larger than the dense cap are
// refused with guidance to lower the cutoff.
EvolutionResult evolve_exact(const LiouvilleState& state, const SparseOperator& generator,
                             double t, const OracleOptions& opts = {});

// Same evolution sampled on a uniform time grid (one block exponential per
// block at the grid spacing, then repeated application).
EvolutionResult evolve_exact_grid(const LiouvilleState& state, const SparseOperator& generator,
                                  const std::vector<double>& times,
                                  const OracleOptions& opts = {});

// Classical fixed-step 4th-order Runge-Kutta integration of
// d/dt |rho> = generator |rho>; cross-check for evolve_exact.
EvolutionResult evolve_ode(const LiouvilleState& state, const SparseOperator& generator,
                           double t, double step, const OracleOptions& opts = {});

// <a^dag a>(t) of the damped linear oscillator from the given initial state,
// on a uniform grid, with trace/hermiticity diagnostics and a least-squares
// exponential fit of <n>(t) - nbar (rate reported, not asserted).
struct RelaxationTrajectory {
    std::vector<double> times;
    std::vector<double> occupation;       // <a^dag a>
    std::vector<Cplx> trace_series;
    std::vector<double> hermiticity_series;
    bool monotone_decreasing = false;
    double fit_rate = 0.0;                // slope of ln(<n> - nbar) when defined
    double fit_residual = 0.0;            // max abs residual of the fit
    bool fit_valid = false;
};

RelaxationTrajectory damped_oscillator_relaxation(const SystemConfig& config,
                                                  const LiouvilleState& initial,
                                                  const std::vector<double>& t_grid,
                                                  const OracleOptions& opts = {});

}  // namespace tfdkerr
