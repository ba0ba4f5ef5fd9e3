#include "tfdkerr/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace tfdkerr {

SystemConfig SystemConfig::single_mode(double omega, double chi, double gamma,
                                       FockCutoff cutoff) {
    SystemConfig c;
    c.mode_count = 1;
    c.omega = {omega};
    c.chi = {{chi}};
    c.gamma = {gamma};
    c.cutoff = cutoff;
    return c;
}

void SystemConfig::validate() const {
    if (mode_count < 1 || mode_count > DoubledIndex::kMaxModes)
        throw std::invalid_argument("SystemConfig: mode_count out of range");
    if (static_cast<int>(omega.size()) != mode_count ||
        static_cast<int>(gamma.size()) != mode_count ||
        static_cast<int>(chi.size()) != mode_count)
        throw std::invalid_argument("SystemConfig: parameter arrays must have mode_count entries");
    for (const auto& row : chi)
        if (static_cast<int>(row.size()) != mode_count)
            throw std::invalid_argument("SystemConfig: chi must be mode_count x mode_count");
    for (int i = 0; i < mode_count; ++i)
        for (int j = 0; j < i; ++j)
            if (chi[i][j] != chi[j][i])
                throw std::invalid_argument("SystemConfig: chi must be symmetric");
    for (double g : gamma)
        if (g < 0) throw std::invalid_argument("SystemConfig: gamma must be >= 0");
    if (kappa < 0 || nbar < 0)
        throw std::invalid_argument("SystemConfig: kappa and nbar must be >= 0");
    if (cutoff.max_occupation < 1)
        throw std::invalid_argument("SystemConfig: cutoff must be >= 1");
}

namespace {

double sqrt_of(std::int64_t radicand) { return std::sqrt(double(radicand)); }

template <typename F>
void for_each_index(int modes, FockCutoff cutoff, F&& f) {
    const int d = cutoff.max_occupation;
    std::vector<int> m(modes, 0), n(modes, 0);
    while (true) {
        f(DoubledIndex(m, n));
        int i = 0;
        for (; i < 2 * modes; ++i) {
            int& reg = (i % 2 == 0) ? n[i / 2] : m[i / 2];
            if (++reg < d) break;
            reg = 0;
        }
        if (i == 2 * modes) break;
    }
}

}  // namespace

SU2Generators build_su2(FockCutoff cutoff, int modes, int mode) {
    if (mode < 0 || mode >= modes) throw std::invalid_argument("build_su2: bad mode");
    SparseOperator s0 = SparseOperator::diagonal(modes, cutoff, [mode](const DoubledIndex& i) {
        return Cplx{double(i.m(mode) + i.n(mode)), 0.0};
    });
    SparseOperator s3 = SparseOperator::diagonal(modes, cutoff, [mode](const DoubledIndex& i) {
        return Cplx{0.5 * double(i.m(mode) - i.n(mode)), 0.0};
    });
    SparseOperator sp(modes, cutoff), sm(modes, cutoff);
    const int d = cutoff.max_occupation;
    for_each_index(modes, cutoff, [&](const DoubledIndex& col) {
        const int m = col.m(mode), n = col.n(mode);
        // S+ = a^dag a~ : sqrt((m+1) n), S- = a a~^dag : sqrt(m (n+1))
        if (n > 0 && m + 1 < d)
            sp.add_entry(col.with_m(mode, m + 1).with_n(mode, n - 1), col,
                         sqrt_of(std::int64_t(m + 1) * n));
        if (m > 0 && n + 1 < d)
            sm.add_entry(col.with_m(mode, m - 1).with_n(mode, n + 1), col,
                         sqrt_of(std::int64_t(m) * (n + 1)));
    });
    return SU2Generators{mode, std::move(s0), std::move(s3), std::move(sp), std::move(sm)};
}

SU2Generators build_su2(const SystemConfig& config, int mode) {
    config.validate();
    return build_su2(config.cutoff, config.mode_count, mode);
}

SU11Generators build_su11(FockCutoff cutoff) {
    SparseOperator k0 = SparseOperator::diagonal(1, cutoff, [](const DoubledIndex& i) {
        return Cplx{double(i.m(0) - i.n(0)), 0.0};
    });
    SparseOperator k3 = SparseOperator::diagonal(1, cutoff, [](const DoubledIndex& i) {
        return Cplx{0.5 * double(i.m(0) + i.n(0) + 1), 0.0};
    });
    SparseOperator kp(1, cutoff), km(1, cutoff);
    const int d = cutoff.max_occupation;
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            DoubledIndex col(m, n);
            if (m + 1 < d && n + 1 < d)
                kp.add_entry(DoubledIndex(m + 1, n + 1), col,
                             sqrt_of(std::int64_t(m + 1) * (n + 1)));
            if (m > 0 && n > 0)
                km.add_entry(DoubledIndex(m - 1, n - 1), col, sqrt_of(std::int64_t(m) * n));
        }
    }
    return SU11Generators{std::move(k0), std::move(k3), std::move(kp), std::move(km)};
}

SU11Generators build_su11(const SystemConfig& config) {
    config.validate();
    if (config.mode_count != 1)
        throw std::invalid_argument("build_su11: single mode only");
    return build_su11(config.cutoff);
}

SparseOperator build_kerr_hat_H(const SystemConfig& config) {
    config.validate();
    if (config.mode_count != 1)
        throw std::invalid_argument("build_kerr_hat_H: single mode only");
    const double w = config.omega[0], chi = config.chi[0][0];
    return SparseOperator::diagonal(1, config.cutoff, [w, chi](const DoubledIndex& i) {
        const double m = i.m(0), n = i.n(0);
        return Cplx{0.0, -(w * (m - n) + chi * (m * m - n * n))};
    });
}

SparseOperator build_damped_su2_hat_H(const SystemConfig& config) {
    return build_damped_su2_hat_H(config, config.cutoff);
}

SparseOperator build_damped_su2_hat_H(const SystemConfig& config, FockCutoff space) {
    config.validate();
    const int N = config.mode_count;
    const int d = space.max_occupation;
    SparseOperator out(N, space);
    for_each_index(N, space, [&](const DoubledIndex& col) {
        Cplx diag = 0.0;
        for (int i = 0; i < N; ++i) {
            const double s3 = 0.5 * double(col.m(i) - col.n(i));
            diag += Cplx{-config.gamma[i] * s3, -config.omega[i] * s3};
            for (int j = 0; j < N; ++j) {
                const double s0j = double(col.m(j) + col.n(j));
                diag += Cplx{0.0, -config.chi[i][j] * s0j * s3};
            }
        }
        if (diag != Cplx{0.0, 0.0}) out.add_entry(col, col, diag);
        for (int i = 0; i < N; ++i) {
            const int m = col.m(i), n = col.n(i);
            if (config.gamma[i] == 0.0) continue;
            if (n > 0 && m + 1 < d)
                out.add_entry(col.with_m(i, m + 1).with_n(i, n - 1), col,
                              config.gamma[i] * sqrt_of(std::int64_t(m + 1) * n));
            if (m > 0 && n + 1 < d)
                out.add_entry(col.with_m(i, m - 1).with_n(i, n + 1), col,
                              config.gamma[i] * sqrt_of(std::int64_t(m) * (n + 1)));
        }
    });
    return out;
}

SparseOperator build_damped_oscillator_liouvillian(const SystemConfig& config, bool as_printed) {
    config.validate();
    if (config.mode_count != 1)
        throw std::invalid_argument("build_damped_oscillator_liouvillian: single mode only");
    const double k = config.kappa, nb = config.nbar, w = config.omega[0];
    const int d = config.cutoff.max_occupation;
    SparseOperator out(1, config.cutoff);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            DoubledIndex col(m, n);
            Cplx diag{-0.5 * k * (nb + 1.0) * double(m + n) - 0.5 * k * nb * double(m + n + 2),
                      -w * double(m - n)};
            if (as_printed) diag += Cplx{-0.5 * k, w};
            if (diag != Cplx{0.0, 0.0}) out.add_entry(col, col, diag);
            if (m > 0 && n > 0)
                out.add_entry(DoubledIndex(m - 1, n - 1), col,
                              k * (nb + 1.0) * sqrt_of(std::int64_t(m) * n));
            if (nb > 0 && m + 1 < d && n + 1 < d)
                out.add_entry(DoubledIndex(m + 1, n + 1), col,
                              k * nb * sqrt_of(std::int64_t(m + 1) * (n + 1)));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bracket relation checks

namespace {

// One generator as its action on the register pair of one mode: either a
// diagonal rational value or a single transition whose value is sqrt(radicand).
struct GenDesc {
    int dm = 0, dn = 0;
    // radicand(m, n) of the transition entry from (m,n); <= 0 means no entry
    std::int64_t (*radicand)(int, int) = nullptr;
    // diagonal value (exact in double: integers and half-integers)
    double (*diag)(int, int) = nullptr;
};

struct Relation {
    const GenDesc* x;
    const GenDesc* y;
    const GenDesc* rhs;  // [x, y] == rhs_coeff * rhs
    double rhs_coeff;
    const char* name;
};

// exact integer square root test
bool perfect_square(std::int64_t v, std::int64_t* root) {
    if (v < 0) return false;
    const std::int64_t r = std::llround(std::sqrt(double(v)));
    for (std::int64_t c = std::max<std::int64_t>(0, r - 1); c <= r + 1; ++c) {
        if (c * c == v) {
            *root = c;
            return true;
        }
    }
    return false;
}

// Radical-valued amplitude c * sqrt(rad) attached to a register pair.
struct RadTerm {
    int m, n;
    std::int64_t rad;  // 1 for rational terms
    double coeff;
};

void apply_desc(const GenDesc& g, std::vector<RadTerm>& terms) {
    std::vector<RadTerm> out;
    out.reserve(terms.size());
    for (const RadTerm& t : terms) {
        if (g.diag) {
            double v = g.diag(t.m, t.n);
            if (v != 0.0) out.push_back({t.m, t.n, t.rad, t.coeff * v});
        } else {
            const std::int64_t r = g.radicand(t.m, t.n);
            if (r <= 0) continue;
            RadTerm nt{t.m + g.dm, t.n + g.dn, 1, t.coeff};
            if (t.rad == 1) {
                nt.rad = r;
            } else if (t.rad == r) {
                nt.coeff *= double(r);  // sqrt(r)*sqrt(r), exact
            } else {
                std::int64_t root = 0, prod = t.rad * r;
                if (perfect_square(prod, &root)) {
                    nt.coeff *= double(root);
                } else {
                    nt.rad = prod;
                }
            }
            out.push_back(nt);
        }
    }
    terms = std::move(out);
}

// max over grouped radicands of |sum coeff| * sqrt(rad)
double collapse_defect(std::vector<RadTerm>& terms) {
    std::map<std::tuple<int, int, std::int64_t>, double> groups;
    for (const RadTerm& t : terms) groups[{t.m, t.n, t.rad}] += t.coeff;
    double worst = 0.0;
    for (const auto& [key, c] : groups)
        worst = std::max(worst, std::abs(c) * std::sqrt(double(std::get<2>(key))));
    return worst;
}

double radical_defect(const std::vector<Relation>& relations, int d) {
    double worst = 0.0;
    for (const Relation& rel : relations) {
        for (int m = 0; m + 2 <= d; ++m) {
            for (int n = 0; n + 2 <= d; ++n) {
                std::vector<RadTerm> acc;
                std::vector<RadTerm> t{{m, n, 1, 1.0}};
                apply_desc(*rel.y, t);
                apply_desc(*rel.x, t);
                acc.insert(acc.end(), t.begin(), t.end());
                t = {{m, n, 1, -1.0}};
                apply_desc(*rel.x, t);
                apply_desc(*rel.y, t);
                acc.insert(acc.end(), t.begin(), t.end());
                t = {{m, n, 1, -rel.rhs_coeff}};
                apply_desc(*rel.rhs, t);
                acc.insert(acc.end(), t.begin(), t.end());
                worst = std::max(worst, collapse_defect(acc));
            }
        }
    }
    return worst;
}

// Verify the stored operator is exactly the descriptor's matrix on its mode:
// every entry bit-equal to RN(sqrt(radicand)) or to the diagonal value, and no
// entries missing or extra.
bool matches_desc(const SparseOperator& op, const GenDesc& g, int mode) {
    const int d = op.cutoff().max_occupation;
    std::size_t expected = 0;
    bool ok = true;
    op.for_each_entry([&](const DoubledIndex& row, const DoubledIndex& col, Cplx v) {
        if (!ok) return;
        for (int i = 0; i < op.modes(); ++i) {
            if (i == mode) continue;
            if (row.m(i) != col.m(i) || row.n(i) != col.n(i)) { ok = false; return; }
        }
        const int m = col.m(mode), n = col.n(mode);
        if (g.diag) {
            ok = (row == col) && v == Cplx{g.diag(m, n), 0.0};
        } else {
            ok = row.m(mode) == m + g.dm && row.n(mode) == n + g.dn &&
                 g.radicand(m, n) > 0 && v == Cplx{std::sqrt(double(g.radicand(m, n))), 0.0};
        }
    });
    if (!ok) return false;
    // count expected entries over the mode's register pairs
    std::size_t per_pair = 0;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            if (g.diag) {
                if (g.diag(m, n) != 0.0) ++per_pair;
            } else if (g.radicand(m, n) > 0 && m + g.dm >= 0 && m + g.dm < d && n + g.dn >= 0 &&
                       n + g.dn < d) {
                ++per_pair;
            }
        }
    std::size_t other = 1;
    for (int i = 1; i < op.modes(); ++i) other *= std::size_t(d) * d;
    expected = per_pair * other;
    return op.entry_count() == expected;
}

// plain floating bracket evaluation restricted to interior columns of `mode`
double fp_defect(const SparseOperator& x, const SparseOperator& y, const SparseOperator& rhs,
                 double rhs_coeff, int mode) {
    SparseOperator c = x * y - y * x - rhs.scaled(rhs_coeff);
    const int d = x.cutoff().max_occupation;
    double worst = 0.0;
    c.for_each_entry([&](const DoubledIndex& row, const DoubledIndex& col, Cplx v) {
        if (col.m(mode) + 2 <= d && col.n(mode) + 2 <= d)
            worst = std::max(worst, std::abs(v));
    });
    return worst;
}

// descriptors
std::int64_t rad_sp(int m, int n) { return n > 0 ? std::int64_t(m + 1) * n : 0; }
std::int64_t rad_sm(int m, int n) { return m > 0 ? std::int64_t(m) * (n + 1) : 0; }
std::int64_t rad_kp(int m, int n) { return std::int64_t(m + 1) * (n + 1); }
std::int64_t rad_km(int m, int n) { return (m > 0 && n > 0) ? std::int64_t(m) * n : 0; }
double diag_s0(int m, int n) { return double(m + n); }
double diag_s3(int m, int n) { return 0.5 * double(m - n); }
double diag_k0(int m, int n) { return double(m - n); }
double diag_k3(int m, int n) { return 0.5 * double(m + n + 1); }

const GenDesc kS0{0, 0, nullptr, diag_s0};
const GenDesc kS3{0, 0, nullptr, diag_s3};
const GenDesc kSp{+1, -1, rad_sp, nullptr};
const GenDesc kSm{-1, +1, rad_sm, nullptr};
const GenDesc kK0{0, 0, nullptr, diag_k0};
const GenDesc kK3{0, 0, nullptr, diag_k3};
const GenDesc kKp{+1, +1, rad_kp, nullptr};
const GenDesc kKm{-1, -1, rad_km, nullptr};

// [S3,S+] = S+, [S3,S-] = -S-, [S+,S-] = 2 S3, and S0 central.
const std::vector<Relation> kSU2Relations = {
    {&kS3, &kSp, &kSp, 1.0, "[S3,S+]-S+"},
    {&kS3, &kSm, &kSm, -1.0, "[S3,S-]+S-"},
    {&kSp, &kSm, &kS3, 2.0, "[S+,S-]-2S3"},
    {&kS0, &kSp, &kSp, 0.0, "[S0,S+]"},
    {&kS0, &kSm, &kSm, 0.0, "[S0,S-]"},
    {&kS0, &kS3, &kS3, 0.0, "[S0,S3]"},
};

// Measured relations of this realization: [K3,K+] = K+, [K3,K-] = -K-,
// [K+,K-] = -2 K3 (the commonly printed [K3,K-] = K- and [K+,K-] = 2 K3
// carry sign typos for these generators), and K0 central.
const std::vector<Relation> kSU11Relations = {
    {&kK3, &kKp, &kKp, 1.0, "[K3,K+]-K+"},
    {&kK3, &kKm, &kKm, -1.0, "[K3,K-]+K-"},
    {&kKp, &kKm, &kK3, -2.0, "[K+,K-]+2K3"},
    {&kK0, &kKp, &kKp, 0.0, "[K0,K+]"},
    {&kK0, &kKm, &kKm, 0.0, "[K0,K-]"},
};

}  // namespace

double commutator_defect(const SU2Generators& g) {
    const bool exact = matches_desc(g.S0, kS0, g.mode) && matches_desc(g.S3, kS3, g.mode) &&
                       matches_desc(g.S_plus, kSp, g.mode) && matches_desc(g.S_minus, kSm, g.mode);
    if (exact) return radical_defect(kSU2Relations, g.S0.cutoff().max_occupation);
    return commutator_defect_fp(g);
}

double commutator_defect(const SU11Generators& g) {
    const bool exact = matches_desc(g.K0, kK0, 0) && matches_desc(g.K3, kK3, 0) &&
                       matches_desc(g.K_plus, kKp, 0) && matches_desc(g.K_minus, kKm, 0);
    if (exact) return radical_defect(kSU11Relations, g.K0.cutoff().max_occupation);
    return commutator_defect_fp(g);
}

double commutator_defect_fp(const SU2Generators& g) {
    double worst = 0.0;
    worst = std::max(worst, fp_defect(g.S3, g.S_plus, g.S_plus, 1.0, g.mode));
    worst = std::max(worst, fp_defect(g.S3, g.S_minus, g.S_minus, -1.0, g.mode));
    worst = std::max(worst, fp_defect(g.S_plus, g.S_minus, g.S3, 2.0, g.mode));
    worst = std::max(worst, fp_defect(g.S0, g.S_plus, g.S_plus, 0.0, g.mode));
    worst = std::max(worst, fp_defect(g.S0, g.S_minus, g.S_minus, 0.0, g.mode));
    return worst;
}

double commutator_defect_fp(const SU11Generators& g) {
    double worst = 0.0;
    worst = std::max(worst, fp_defect(g.K3, g.K_plus, g.K_plus, 1.0, 0));
    worst = std::max(worst, fp_defect(g.K3, g.K_minus, g.K_minus, -1.0, 0));
    worst = std::max(worst, fp_defect(g.K_plus, g.K_minus, g.K3, -2.0, 0));
    worst = std::max(worst, fp_defect(g.K0, g.K_plus, g.K_plus, 0.0, 0));
    worst = std::max(worst, fp_defect(g.K0, g.K_minus, g.K_minus, 0.0, 0));
    return worst;
}

std::vector<int> sector_values(FockCutoff cutoff) {
    std::vector<int> out;
    for (int s = 0; s <= 2 * (cutoff.max_occupation - 1); ++s) out.push_back(s);
    return out;
}

FockCutoff sector_complete_cutoff(const LiouvilleState& state) {
    return FockCutoff(std::max(state.cutoff().max_occupation, state.max_sector() + 1));
}

double trace_preservation_defect(const SparseOperator& generator, double* boundary_leak) {
    const int d = generator.cutoff().max_occupation;
    double interior = 0.0, boundary = 0.0;
    for (const auto& [col, entries] : generator.columns()) {
        Cplx s = 0.0;
        for (const auto& [row, v] : entries)
            if (row.is_diagonal()) s += v;
        bool is_interior = true;
        for (int i = 0; i < generator.modes(); ++i)
            if (col.m(i) + 2 > d || col.n(i) + 2 > d) is_interior = false;
        double& slot = is_interior ? interior : boundary;
        slot = std::max(slot, std::abs(s));
    }
    if (boundary_leak) *boundary_leak = boundary;
    return interior;
}

}  // namespace tfdkerr
