#include "tfdkerr/propagator.hpp"

#include <algorithm>
#include <cmath>

namespace tfdkerr {

std::int64_t pochhammer_falling(std::int64_t j, int n) {
    std::int64_t p = 1;
    for (int k = 0; k < n; ++k) p *= j - k;
    return p;
}

std::int64_t pochhammer_rising(std::int64_t j, int n) {
    std::int64_t p = 1;
    for (int k = 0; k < n; ++k) p *= j + k;
    return p;
}

SectorFactorTable build_sector_factor_table(const LiouvilleState& state,
                                            const SystemConfig& config, double t) {
    SectorFactorTable table;
    table.t = t;
    for (const auto& [idx, amp] : state.coefficients()) {
        std::vector<int> key = idx.sectors();
        if (table.factors.count(key)) continue;
        std::vector<GaussFactors> per_mode;
        per_mode.reserve(config.mode_count);
        for (int i = 0; i < config.mode_count; ++i)
            per_mode.push_back(gauss_factorize(sector_coefficients(config, i, key, t)));
        table.factors.emplace(std::move(key), std::move(per_mode));
    }
    return table;
}

namespace {

struct Term {
    DoubledIndex idx;
    Cplx amp;
};

// One-mode kernel applied to a single basis term.  Appends the image terms.
void apply_mode_kernel(const Term& term, int mode, const GaussFactors& f,
                       const PropagateOptions& opts, double scale, std::vector<Term>& out) {
    const int m = term.idx.m(mode), n = term.idx.n(mode);
    const Cplx inv_p2 = 1.0 / (f.exp_half_Gamma3 * f.exp_half_Gamma3);

    // (e^{G3/2})^(m-n), by repeated multiplication (integer powers only)
    Cplx phase = 1.0;
    const Cplx base = (m >= n) ? f.exp_half_Gamma3 : 1.0 / f.exp_half_Gamma3;
    for (int k = 0; k < std::abs(m - n); ++k) phase *= base;

    Cplx ar = term.amp;
    for (int r = 0; r <= m; ++r) {
        if (r > 0) {
            ar *= f.Gamma_minus / double(r) *
                  std::sqrt(double(std::int64_t(m - r + 1) * (n + r)));
            phase *= inv_p2;
        }
        Cplx bs = ar * phase;
        for (int s = 0; s <= n + r; ++s) {
            if (s > 0)
                bs *= f.Gamma_plus / double(s) *
                      std::sqrt(double(std::int64_t(n + r - s + 1) * (m - r + s)));
            if (!opts.strict && std::abs(bs) < opts.prune_threshold * scale)
                continue;  // negligible term, skip the insert only
            out.push_back(
                {term.idx.with_m(mode, m - r + s).with_n(mode, n + r - s), bs});
        }
    }
}

}  // namespace

LiouvilleState propagate_closed_form_multimode(const LiouvilleState& state,
                                               const SystemConfig& config, double t,
                                               const PropagateOptions& opts) {
    config.validate();
    if (state.modes() != config.mode_count)
        throw std::invalid_argument("propagate_closed_form: state/config mode mismatch");

    const SectorFactorTable table = build_sector_factor_table(state, config, t);
    const FockCutoff out_cutoff = sector_complete_cutoff(state);
    LiouvilleState out(state.modes(), out_cutoff);
    const double scale = state.max_abs();

    for (const auto& [idx, amp] : state.coefficients()) {
        const auto& per_mode = table.factors.at(idx.sectors());
        std::vector<Term> terms{{idx, amp}};
        std::vector<Term> next;
        for (int i = 0; i < config.mode_count; ++i) {
            next.clear();
            for (const Term& term : terms)
                apply_mode_kernel(term, i, per_mode[i], opts, scale, next);
            terms.swap(next);
        }
        for (const Term& term : terms) {
            for (int i = 0; i < config.mode_count; ++i) {
                if (term.idx.sector(i) != idx.sector(i))
                    throw std::logic_error("propagate_closed_form: sector conservation violated");
            }
            out.add(term.idx, term.amp);
        }
    }
    return out;
}

LiouvilleState propagate_closed_form(const LiouvilleState& state, const SystemConfig& config,
                                     double t, const PropagateOptions& opts) {
    if (config.mode_count != 1)
        throw std::invalid_argument("propagate_closed_form: single mode only; use the multimode variant");
    return propagate_closed_form_multimode(state, config, t, opts);
}

}  // namespace tfdkerr
