#include "tfdkerr/fock.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace tfdkerr {

std::string DoubledIndex::str() const {
    std::ostringstream os;
    os << "|";
    for (int i = 0; i < modes(); ++i) os << (i ? "," : "") << m(i);
    os << ";";
    for (int i = 0; i < modes(); ++i) os << (i ? "," : "") << n(i);
    os << ">";
    return os.str();
}

// ---------------------------------------------------------------------------
// LiouvilleState

void LiouvilleState::set(const DoubledIndex& idx, Cplx value) {
    check(idx);
    if (value == Cplx{0.0, 0.0})
        coeff_.erase(idx);
    else
        coeff_[idx] = value;
}

void LiouvilleState::add(const DoubledIndex& idx, Cplx value) {
    check(idx);
    auto it = coeff_.find(idx);
    if (it == coeff_.end()) {
        if (value != Cplx{0.0, 0.0}) coeff_.emplace(idx, value);
    } else {
        it->second += value;
    }
}

Cplx LiouvilleState::at(const DoubledIndex& idx) const {
    auto it = coeff_.find(idx);
    return it == coeff_.end() ? Cplx{0.0, 0.0} : it->second;
}

Cplx LiouvilleState::trace() const {
    Cplx t = 0.0;
    for (const auto& [idx, v] : coeff_)
        if (idx.is_diagonal()) t += v;
    return t;
}

double LiouvilleState::hermiticity_defect() const {
    double worst = 0.0;
    for (const auto& [idx, v] : coeff_) {
        Cplx partner = at(idx.tilde_swapped());
        worst = std::max(worst, std::abs(v - std::conj(partner)));
    }
    return worst;
}

double LiouvilleState::purity() const {
    double p = 0.0;
    for (const auto& [idx, v] : coeff_) p += std::norm(v);
    return p;
}

double LiouvilleState::max_abs() const {
    double worst = 0.0;
    for (const auto& [idx, v] : coeff_) worst = std::max(worst, std::abs(v));
    return worst;
}

double LiouvilleState::norm2() const { return std::sqrt(purity()); }

int LiouvilleState::max_sector() const {
    int worst = 0;
    for (const auto& [idx, v] : coeff_)
        for (int i = 0; i < modes_; ++i) worst = std::max(worst, idx.sector(i));
    return worst;
}

void LiouvilleState::compress(double threshold) {
    for (auto it = coeff_.begin(); it != coeff_.end();) {
        if (std::abs(it->second) <= threshold)
            it = coeff_.erase(it);
        else
            ++it;
    }
}

LiouvilleState LiouvilleState::with_cutoff(FockCutoff c) const {
    FockCutoff target(std::max(c.max_occupation, cutoff_.max_occupation));
    LiouvilleState out(modes_, target);
    for (const auto& [idx, v] : coeff_) out.set(idx, v);
    return out;
}

LiouvilleState& LiouvilleState::operator+=(const LiouvilleState& other) {
    if (other.modes_ != modes_) throw std::invalid_argument("LiouvilleState: mode mismatch");
    if (other.cutoff_.max_occupation > cutoff_.max_occupation)
        cutoff_ = other.cutoff_;
    for (const auto& [idx, v] : other.coeff_) add(idx, v);
    return *this;
}

LiouvilleState& LiouvilleState::operator*=(Cplx scale) {
    for (auto& [idx, v] : coeff_) v *= scale;
    return *this;
}

double max_abs_difference(const LiouvilleState& a, const LiouvilleState& b) {
    double worst = 0.0;
    for (const auto& [idx, v] : a.coefficients())
        worst = std::max(worst, std::abs(v - b.at(idx)));
    for (const auto& [idx, v] : b.coefficients())
        worst = std::max(worst, std::abs(v - a.at(idx)));
    return worst;
}

// ---------------------------------------------------------------------------
// SparseOperator

SparseOperator SparseOperator::identity(int modes, FockCutoff cutoff) {
    return diagonal(modes, cutoff, [](const DoubledIndex&) { return Cplx{1.0, 0.0}; });
}

namespace {

// Enumerate every basis index of the N-mode doubled space, in index order.
template <typename F>
void for_each_basis_index(int modes, FockCutoff cutoff, F&& f) {
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

SparseOperator SparseOperator::diagonal(int modes, FockCutoff cutoff,
                                        const std::function<Cplx(const DoubledIndex&)>& f) {
    SparseOperator op(modes, cutoff);
    for_each_basis_index(modes, cutoff, [&](const DoubledIndex& idx) {
        Cplx v = f(idx);
        if (v != Cplx{0.0, 0.0}) op.cols_[idx].emplace_back(idx, v);
    });
    return op;
}

void SparseOperator::add_entry(const DoubledIndex& row, const DoubledIndex& col, Cplx value) {
    check(row);
    check(col);
    if (value == Cplx{0.0, 0.0}) return;
    auto& entries = cols_[col];
    for (auto& [r, v] : entries) {
        if (r == row) {
            v += value;
            return;
        }
    }
    entries.emplace_back(row, value);
}

const std::vector<std::pair<DoubledIndex, Cplx>>& SparseOperator::column(
    const DoubledIndex& col) const {
    static const std::vector<std::pair<DoubledIndex, Cplx>> empty;
    auto it = cols_.find(col);
    return it == cols_.end() ? empty : it->second;
}

std::size_t SparseOperator::entry_count() const {
    std::size_t n = 0;
    for (const auto& [col, entries] : cols_) n += entries.size();
    return n;
}

LiouvilleState SparseOperator::apply(const LiouvilleState& state) const {
    if (state.modes() != modes_)
        throw std::invalid_argument("SparseOperator::apply: mode mismatch");
    if (state.cutoff().max_occupation > cutoff_.max_occupation)
        throw std::invalid_argument("SparseOperator::apply: state cutoff exceeds operator space");
    LiouvilleState out(modes_, cutoff_);
    for (const auto& [idx, amp] : state.coefficients()) {
        auto it = cols_.find(idx);
        if (it == cols_.end()) continue;
        for (const auto& [row, val] : it->second) out.add(row, val * amp);
    }
    return out;
}

SparseOperator SparseOperator::operator*(const SparseOperator& rhs) const {
    if (rhs.modes_ != modes_ || !(rhs.cutoff_ == cutoff_))
        throw std::invalid_argument("SparseOperator: space mismatch in product");
    SparseOperator out(modes_, cutoff_);
    for (const auto& [col, entries] : rhs.cols_) {
        std::map<DoubledIndex, Cplx> acc;
        for (const auto& [mid, v1] : entries) {
            auto it = cols_.find(mid);
            if (it == cols_.end()) continue;
            for (const auto& [row, v2] : it->second) acc[row] += v2 * v1;
        }
        auto& list = out.cols_[col];
        for (const auto& [row, v] : acc)
            if (v != Cplx{0.0, 0.0}) list.emplace_back(row, v);
        if (list.empty()) out.cols_.erase(col);
    }
    return out;
}

SparseOperator SparseOperator::operator+(const SparseOperator& rhs) const {
    if (rhs.modes_ != modes_ || !(rhs.cutoff_ == cutoff_))
        throw std::invalid_argument("SparseOperator: space mismatch in sum");
    SparseOperator out = *this;
    for (const auto& [col, entries] : rhs.cols_)
        for (const auto& [row, v] : entries) out.add_entry(row, col, v);
    return out;
}

SparseOperator SparseOperator::operator-(const SparseOperator& rhs) const {
    return *this + rhs.scaled(Cplx{-1.0, 0.0});
}

SparseOperator SparseOperator::scaled(Cplx factor) const {
    SparseOperator out(modes_, cutoff_);
    if (factor == Cplx{0.0, 0.0}) return out;
    out.cols_ = cols_;
    for (auto& [col, entries] : out.cols_)
        for (auto& [row, v] : entries) v *= factor;
    return out;
}

SparseOperator SparseOperator::tilde_conjugate() const {
    SparseOperator out(modes_, cutoff_);
    for (const auto& [col, entries] : cols_)
        for (const auto& [row, v] : entries)
            out.add_entry(row.tilde_swapped(), col.tilde_swapped(), std::conj(v));
    return out;
}

SparseOperator SparseOperator::adjoint() const {
    SparseOperator out(modes_, cutoff_);
    for (const auto& [col, entries] : cols_)
        for (const auto& [row, v] : entries) out.add_entry(col, row, std::conj(v));
    return out;
}

double SparseOperator::max_abs() const {
    double worst = 0.0;
    for (const auto& [col, entries] : cols_)
        for (const auto& [row, v] : entries) worst = std::max(worst, std::abs(v));
    return worst;
}

double SparseOperator::max_abs_difference(const SparseOperator& other) const {
    double worst = 0.0;
    auto scan = [&](const SparseOperator& a, const SparseOperator& b) {
        for (const auto& [col, entries] : a.cols_) {
            for (const auto& [row, v] : entries) {
                Cplx w = 0.0;
                for (const auto& [r2, v2] : b.column(col))
                    if (r2 == row) { w = v2; break; }
                worst = std::max(worst, std::abs(v - w));
            }
        }
    };
    scan(*this, other);
    scan(other, *this);
    return worst;
}

bool SparseOperator::sector_preserving() const {
    for (const auto& [col, entries] : cols_)
        for (const auto& [row, v] : entries)
            for (int i = 0; i < modes_; ++i)
                if (row.sector(i) != col.sector(i)) return false;
    return true;
}

void SparseOperator::for_each_entry(
    const std::function<void(const DoubledIndex&, const DoubledIndex&, Cplx)>& f) const {
    for (const auto& [col, entries] : cols_)
        for (const auto& [row, v] : entries) f(row, col, v);
}

// ---------------------------------------------------------------------------
// Constructors of states and elementary operators

LiouvilleState identity_vector(FockCutoff cutoff, int modes) {
    LiouvilleState out(modes, cutoff);
    const int d = cutoff.max_occupation;
    std::vector<int> k(modes, 0);
    while (true) {
        out.set(DoubledIndex(k, k), Cplx{1.0, 0.0});
        int i = 0;
        for (; i < modes; ++i) {
            if (++k[i] < d) break;
            k[i] = 0;
        }
        if (i == modes) break;
    }
    return out;
}

LadderSet ladder_operators(FockCutoff cutoff, int modes, int mode) {
    if (mode < 0 || mode >= modes) throw std::invalid_argument("ladder_operators: bad mode");
    SparseOperator a(modes, cutoff), a_dag(modes, cutoff);
    SparseOperator at(modes, cutoff), at_dag(modes, cutoff);
    const int d = cutoff.max_occupation;
    // Build columns: for every basis index, one entry per operator where the
    // matrix element is nonzero.  a^dag / a~^dag drop the row beyond the top.
    std::vector<int> m(modes, 0), n(modes, 0);
    while (true) {
        DoubledIndex col(m, n);
        const int mm = col.m(mode), nn = col.n(mode);
        if (mm > 0) a.add_entry(col.with_m(mode, mm - 1), col, std::sqrt(double(mm)));
        if (mm + 1 < d) a_dag.add_entry(col.with_m(mode, mm + 1), col, std::sqrt(double(mm + 1)));
        if (nn > 0) at.add_entry(col.with_n(mode, nn - 1), col, std::sqrt(double(nn)));
        if (nn + 1 < d) at_dag.add_entry(col.with_n(mode, nn + 1), col, std::sqrt(double(nn + 1)));
        int i = 0;
        for (; i < 2 * modes; ++i) {
            int& reg = (i % 2 == 0) ? n[i / 2] : m[i / 2];
            if (++reg < d) break;
            reg = 0;
        }
        if (i == 2 * modes) break;
    }
    return LadderSet{std::move(a), std::move(a_dag), std::move(at), std::move(at_dag)};
}

SparseOperator number_operator(FockCutoff cutoff, int modes, int mode) {
    return SparseOperator::diagonal(modes, cutoff, [mode](const DoubledIndex& idx) {
        return Cplx{double(idx.m(mode)), 0.0};
    });
}

SparseOperator tilde_number_operator(FockCutoff cutoff, int modes, int mode) {
    return SparseOperator::diagonal(modes, cutoff, [mode](const DoubledIndex& idx) {
        return Cplx{double(idx.n(mode)), 0.0};
    });
}

Cplx expectation(const SparseOperator& op, const LiouvilleState& state) {
    return op.apply(state).trace();
}

Cplx trace(const LiouvilleState& state) { return state.trace(); }
double hermiticity_defect(const LiouvilleState& state) { return state.hermiticity_defect(); }

namespace {

void warn_neglected(const char* what, double neglected, double* out) {
    if (out) *out = neglected;
    if (neglected > 1e-12)
        std::cerr << "warning: " << what << ": cutoff neglects weight " << neglected << "\n";
}

}  // namespace

LiouvilleState coherent_state_rho(const std::vector<Cplx>& alpha, FockCutoff cutoff,
                                  double* neglected_weight) {
    const int modes = static_cast<int>(alpha.size());
    LiouvilleState out(modes, cutoff);
    const int d = cutoff.max_occupation;

    // Per-mode amplitude vectors c_k = e^{-|a|^2/2} a^k / sqrt(k!).
    std::vector<std::vector<Cplx>> amps(modes);
    double neglected = 0.0;
    for (int i = 0; i < modes; ++i) {
        amps[i].resize(d);
        double pref = std::exp(-0.5 * std::norm(alpha[i]));
        Cplx c = pref;
        double weight = 0.0;
        for (int k = 0; k < d; ++k) {
            amps[i][k] = c;
            weight += std::norm(c);
            c *= alpha[i] / std::sqrt(double(k + 1));
        }
        neglected = std::max(neglected, 1.0 - weight);
    }
    warn_neglected("coherent_state_rho", neglected, neglected_weight);

    std::vector<int> m(modes, 0), n(modes, 0);
    while (true) {
        Cplx v = 1.0;
        for (int i = 0; i < modes; ++i) v *= amps[i][m[i]] * std::conj(amps[i][n[i]]);
        out.set(DoubledIndex(m, n), v);
        int i = 0;
        for (; i < 2 * modes; ++i) {
            int& reg = (i % 2 == 0) ? n[i / 2] : m[i / 2];
            if (++reg < d) break;
            reg = 0;
        }
        if (i == 2 * modes) break;
    }
    return out;
}

LiouvilleState coherent_state_rho(Cplx alpha, FockCutoff cutoff, double* neglected_weight) {
    return coherent_state_rho(std::vector<Cplx>{alpha}, cutoff, neglected_weight);
}

LiouvilleState thermal_state_rho(double nbar, FockCutoff cutoff, int modes,
                                 double* neglected_weight) {
    if (nbar < 0) throw std::invalid_argument("thermal_state_rho: nbar must be >= 0");
    LiouvilleState out(modes, cutoff);
    const int d = cutoff.max_occupation;
    std::vector<double> p(d);
    double weight = 0.0;
    for (int k = 0; k < d; ++k) {
        p[k] = std::pow(nbar, k) / std::pow(1.0 + nbar, k + 1);
        weight += p[k];
    }
    warn_neglected("thermal_state_rho", 1.0 - weight, neglected_weight);

    std::vector<int> k(modes, 0);
    while (true) {
        double v = 1.0;
        for (int i = 0; i < modes; ++i) v *= p[k[i]];
        out.set(DoubledIndex(k, k), Cplx{v, 0.0});
        int i = 0;
        for (; i < modes; ++i) {
            if (++k[i] < d) break;
            k[i] = 0;
        }
        if (i == modes) break;
    }
    return out;
}

LiouvilleState number_state_rho(const std::vector<int>& k, FockCutoff cutoff) {
    LiouvilleState out(static_cast<int>(k.size()), cutoff);
    out.set(DoubledIndex(k, k), Cplx{1.0, 0.0});
    return out;
}

LiouvilleState number_state_rho(int k, FockCutoff cutoff) {
    return number_state_rho(std::vector<int>{k}, cutoff);
}

}  // namespace tfdkerr
