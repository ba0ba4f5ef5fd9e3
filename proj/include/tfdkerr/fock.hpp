#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tfdkerr {

using Cplx = std::complex<double>;

// Exclusive per-register occupation bound of the truncated doubled Fock space.
struct FockCutoff {
    int max_occupation = 1;

    FockCutoff() = default;
    explicit FockCutoff(int d) : max_occupation(d) {
        if (d < 1 || d > kMaxOccupation)
            throw std::invalid_argument("FockCutoff: max_occupation must be in [1, " +
                                        std::to_string(kMaxOccupation) + "]");
    }

    static constexpr int kMaxOccupation = 255;

    friend bool operator==(FockCutoff a, FockCutoff b) {
        return a.max_occupation == b.max_occupation;
    }
};

// Basis label |m, n> of the doubled space: m[i] is the non-tilde occupation of
// mode i, n[i] the tilde occupation.  Occupations are packed two bytes per mode,
// which bounds the library at 4 modes and occupation numbers below 256.
class DoubledIndex {
public:
    static constexpr int kMaxModes = 4;

    DoubledIndex() : DoubledIndex(0, 0) {}
    DoubledIndex(int m, int n) : bits_(0), modes_(1) {
        check_range(m); check_range(n);
        bits_ = static_cast<std::uint64_t>(m) | (static_cast<std::uint64_t>(n) << 8);
    }
    DoubledIndex(const std::vector<int>& m, const std::vector<int>& n) : bits_(0) {
        if (m.size() != n.size() || m.empty() || m.size() > kMaxModes)
            throw std::invalid_argument("DoubledIndex: bad register vectors");
        modes_ = static_cast<std::uint8_t>(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            check_range(m[i]); check_range(n[i]);
            bits_ |= static_cast<std::uint64_t>(m[i]) << (16 * i);
            bits_ |= static_cast<std::uint64_t>(n[i]) << (16 * i + 8);
        }
    }

    static DoubledIndex zero(int modes) {
        return DoubledIndex(std::vector<int>(modes, 0), std::vector<int>(modes, 0));
    }

    int modes() const { return modes_; }
    int m(int mode) const { return static_cast<int>((bits_ >> (16 * mode)) & 0xff); }
    int n(int mode) const { return static_cast<int>((bits_ >> (16 * mode + 8)) & 0xff); }
    int sector(int mode) const { return m(mode) + n(mode); }

    std::vector<int> sectors() const {
        std::vector<int> s(modes_);
        for (int i = 0; i < modes_; ++i) s[i] = sector(i);
        return s;
    }

    bool is_diagonal() const {
        for (int i = 0; i < modes_; ++i)
            if (m(i) != n(i)) return false;
        return true;
    }

    DoubledIndex with_m(int mode, int value) const {
        check_range(value);
        DoubledIndex r = *this;
        r.bits_ &= ~(std::uint64_t{0xff} << (16 * mode));
        r.bits_ |= static_cast<std::uint64_t>(value) << (16 * mode);
        return r;
    }
    DoubledIndex with_n(int mode, int value) const {
        check_range(value);
        DoubledIndex r = *this;
        r.bits_ &= ~(std::uint64_t{0xff} << (16 * mode + 8));
        r.bits_ |= static_cast<std::uint64_t>(value) << (16 * mode + 8);
        return r;
    }

    // m <-> n in every mode (the index part of tilde conjugation)
    DoubledIndex tilde_swapped() const {
        DoubledIndex r = *this;
        r.bits_ = ((bits_ & 0x00ff00ff00ff00ffull) << 8) | ((bits_ >> 8) & 0x00ff00ff00ff00ffull);
        return r;
    }

    bool within(FockCutoff c) const {
        for (int i = 0; i < modes_; ++i)
            if (m(i) >= c.max_occupation || n(i) >= c.max_occupation) return false;
        return true;
    }

    std::string str() const;

    friend bool operator==(const DoubledIndex& a, const DoubledIndex& b) {
        return a.modes_ == b.modes_ && a.bits_ == b.bits_;
    }
    friend bool operator!=(const DoubledIndex& a, const DoubledIndex& b) { return !(a == b); }
    friend bool operator<(const DoubledIndex& a, const DoubledIndex& b) {
        return a.modes_ != b.modes_ ? a.modes_ < b.modes_ : a.bits_ < b.bits_;
    }

private:
    static void check_range(int v) {
        if (v < 0 || v > 255) throw std::invalid_argument("DoubledIndex: occupation out of range");
    }

    std::uint64_t bits_;
    std::uint8_t modes_;
};

// |rho> = sum rho_{m,n} |m,n>, stored over its finite support.  Ordered map so
// iteration (and therefore every reduction built on it) is deterministic.
class LiouvilleState {
public:
    LiouvilleState(int modes, FockCutoff cutoff) : modes_(modes), cutoff_(cutoff) {
        if (modes < 1 || modes > DoubledIndex::kMaxModes)
            throw std::invalid_argument("LiouvilleState: bad mode count");
    }

    int modes() const { return modes_; }
    FockCutoff cutoff() const { return cutoff_; }

    void set(const DoubledIndex& idx, Cplx value);
    void add(const DoubledIndex& idx, Cplx value);
    Cplx at(const DoubledIndex& idx) const;

    const std::map<DoubledIndex, Cplx>& coefficients() const { return coeff_; }
    std::size_t support_size() const { return coeff_.size(); }

    Cplx trace() const;                 // sum of diagonal coefficients
    double hermiticity_defect() const;  // max |rho_{m,n} - conj(rho_{n,m})|
    double purity() const;              // sum |rho_{m,n}|^2
    double max_abs() const;
    double norm2() const;               // sqrt(purity)
    int max_sector() const;             // max over support and modes of m_i+n_i

    // Drop entries with |value| <= threshold.
    void compress(double threshold);

    // Same support, cutoff raised to cover at least `c`.
    LiouvilleState with_cutoff(FockCutoff c) const;

    LiouvilleState& operator+=(const LiouvilleState& other);
    LiouvilleState& operator*=(Cplx scale);

private:
    void check(const DoubledIndex& idx) const {
        if (idx.modes() != modes_) throw std::invalid_argument("LiouvilleState: mode mismatch");
        if (!idx.within(cutoff_)) throw std::invalid_argument("LiouvilleState: index beyond cutoff");
    }

    int modes_;
    FockCutoff cutoff_;
    std::map<DoubledIndex, Cplx> coeff_;
};

double max_abs_difference(const LiouvilleState& a, const LiouvilleState& b);

// Sparse complex matrix in the doubled basis, stored column-major:
// column |col> maps to the list of (row, value) of the operator action.
class SparseOperator {
public:
    SparseOperator(int modes, FockCutoff cutoff) : modes_(modes), cutoff_(cutoff) {
        if (modes < 1 || modes > DoubledIndex::kMaxModes)
            throw std::invalid_argument("SparseOperator: bad mode count");
    }

    static SparseOperator identity(int modes, FockCutoff cutoff);
    // Diagonal operator with value f(idx) on |idx>; zero values are not stored.
    static SparseOperator diagonal(int modes, FockCutoff cutoff,
                                   const std::function<Cplx(const DoubledIndex&)>& f);

    int modes() const { return modes_; }
    FockCutoff cutoff() const { return cutoff_; }

    void add_entry(const DoubledIndex& row, const DoubledIndex& col, Cplx value);
    const std::vector<std::pair<DoubledIndex, Cplx>>& column(const DoubledIndex& col) const;
    const std::map<DoubledIndex, std::vector<std::pair<DoubledIndex, Cplx>>>& columns() const {
        return cols_;
    }
    std::size_t entry_count() const;

    LiouvilleState apply(const LiouvilleState& state) const;

    SparseOperator operator*(const SparseOperator& rhs) const;  // this * rhs
    SparseOperator operator+(const SparseOperator& rhs) const;
    SparseOperator operator-(const SparseOperator& rhs) const;
    SparseOperator scaled(Cplx factor) const;

    SparseOperator tilde_conjugate() const;  // swap m/n registers, conjugate values
    SparseOperator adjoint() const;          // conjugate transpose

    double max_abs() const;
    double max_abs_difference(const SparseOperator& other) const;

    // True when every entry conserves m_i + n_i for every mode.
    bool sector_preserving() const;

    void for_each_entry(
        const std::function<void(const DoubledIndex&, const DoubledIndex&, Cplx)>& f) const;

private:
    void check(const DoubledIndex& idx) const {
        if (idx.modes() != modes_) throw std::invalid_argument("SparseOperator: mode mismatch");
        if (!idx.within(cutoff_)) throw std::invalid_argument("SparseOperator: index beyond cutoff");
    }

    int modes_;
    FockCutoff cutoff_;
    std::map<DoubledIndex, std::vector<std::pair<DoubledIndex, Cplx>>> cols_;
};

// Elementary ladder operators of one mode on the N-mode doubled space.
struct LadderSet {
    SparseOperator a;
    SparseOperator a_dag;
    SparseOperator a_tilde;
    SparseOperator a_tilde_dag;
};

// |I> = sum over all diagonal labels |n,n> (product over modes).
LiouvilleState identity_vector(FockCutoff cutoff, int modes);

// a|m,n> = sqrt(m)|m-1,n>, a^dag|m,n> = sqrt(m+1)|m+1,n> (dropped at the top of
// the truncated space), and the tilde pair acting on the n register.
LadderSet ladder_operators(FockCutoff cutoff, int modes, int mode);

// Exact diagonal m_i (the a_i^dag a_i diagonal, entrywise exact integers).
SparseOperator number_operator(FockCutoff cutoff, int modes, int mode);
// Exact diagonal n_i (tilde register).
SparseOperator tilde_number_operator(FockCutoff cutoff, int modes, int mode);

// <A> = <I| A |rho>: apply, then sum the diagonal components.
Cplx expectation(const SparseOperator& op, const LiouvilleState& state);

Cplx trace(const LiouvilleState& state);
double hermiticity_defect(const LiouvilleState& state);

// rho_{m,n} = e^{-|alpha|^2} alpha^m conj(alpha)^n / sqrt(m! n!) per mode.
// If the weight dropped by the cutoff exceeds 1e-12 a warning is emitted on the
// stream (if any) and reported through neglected_weight.
LiouvilleState coherent_state_rho(const std::vector<Cplx>& alpha, FockCutoff cutoff,
                                  double* neglected_weight = nullptr);
LiouvilleState coherent_state_rho(Cplx alpha, FockCutoff cutoff,
                                  double* neglected_weight = nullptr);

// Diagonal nbar^m / (1+nbar)^{m+1} per mode.
LiouvilleState thermal_state_rho(double nbar, FockCutoff cutoff, int modes = 1,
                                 double* neglected_weight = nullptr);

// Single unit entry at (k, k) per mode.
LiouvilleState number_state_rho(const std::vector<int>& k, FockCutoff cutoff);
LiouvilleState number_state_rho(int k, FockCutoff cutoff);

}  // namespace tfdkerr
