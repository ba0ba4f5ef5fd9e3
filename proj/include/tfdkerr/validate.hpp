#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>

#include "tfdkerr/runspec.hpp"

namespace tfdkerr {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

// Property suites behind `validate <suite>`.  All draws come from a fixed-seed
// generator so reports are reproducible.
std::vector<CheckResult> validate_algebra(std::uint64_t seed = 1234);
std::vector<CheckResult> validate_gauss(std::uint64_t seed = 1234);
std::vector<CheckResult> validate_propagator(std::uint64_t seed = 1234);
std::vector<CheckResult> validate_multimode(std::uint64_t seed = 1234);
std::vector<CheckResult> validate_baseline(std::uint64_t seed = 1234);

// suite in {algebra, gauss, propagator, multimode, baseline, all}
std::vector<CheckResult> validate_suite(const std::string& suite, std::uint64_t seed = 1234);

// Prints one line per check; returns 0 when everything passed, 1 otherwise.
int print_report(const std::vector<CheckResult>& results, std::ostream& os);

// Helpers shared between the validation suites and the acceptance tests.
namespace testkit {

Cplx random_cplx(std::mt19937_64& rng, double radius);

// Largest excitation sector whose damped growth (entries ~ e^{1.12 gamma t M})
// keeps an absolute entrywise comparison of two double-precision evolutions
// meaningful.
int sector_budget(double gamma_t, int hard_cap, double budget = 9.0);

LiouvilleState trim_to_sectors(const LiouvilleState& s, const std::vector<int>& max_sector,
                               double amp_floor);

LiouvilleState random_support_state(std::mt19937_64& rng, int modes, FockCutoff cutoff,
                                    const std::vector<int>& max_sector, int count);

// Strict closed form vs dense sector exponential on the same initial state;
// returns the max entrywise difference.
double closed_vs_oracle_once(const SystemConfig& config, const LiouvilleState& state, double t);

// 1 - fidelity of the Kerr-evolved coherent state at chi t = pi/2 against the
// two-branch coherent superposition whose coefficients come from the
// independent diagonal-phase evolution of the pure state.
double yurke_stoler_infidelity(double chi, Cplx alpha, FockCutoff cutoff);

}  // namespace testkit

}  // namespace tfdkerr
