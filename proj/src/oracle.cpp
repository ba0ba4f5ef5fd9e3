#include "tfdkerr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <unsupported/Eigen/MatrixFunctions>

namespace tfdkerr {

Eigen::MatrixXcd expm_dense(const Eigen::MatrixXcd& a) {
    if (!a.allFinite()) throw std::runtime_error("expm_dense: non-finite matrix");
    return a.exp();
}

namespace {

// Ordered basis of one joint sector within the register range d (per mode,
// m from max(0, M-(d-1)) to min(M, d-1), n = M - m).
std::vector<DoubledIndex> sector_basis(const std::vector<int>& sector, int d) {
    std::vector<DoubledIndex> basis;
    const int modes = static_cast<int>(sector.size());
    std::vector<int> m(modes), lo(modes), hi(modes);
    for (int i = 0; i < modes; ++i) {
        lo[i] = std::max(0, sector[i] - (d - 1));
        hi[i] = std::min(sector[i], d - 1);
        if (lo[i] > hi[i]) return basis;
        m[i] = lo[i];
    }
    while (true) {
        std::vector<int> n(modes);
        for (int i = 0; i < modes; ++i) n[i] = sector[i] - m[i];
        basis.emplace_back(m, n);
        int i = 0;
        for (; i < modes; ++i) {
            if (++m[i] <= hi[i]) break;
            m[i] = lo[i];
        }
        if (i == modes) break;
    }
    return basis;
}

Eigen::MatrixXcd dense_on_basis(const SparseOperator& gen,
                                const std::vector<DoubledIndex>& basis) {
    std::map<DoubledIndex, int> pos;
    for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<int>(i);
    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        for (const auto& [row, v] : gen.column(basis[j])) {
            auto it = pos.find(row);
            if (it == pos.end())
                throw std::logic_error("oracle: generator leaves the block basis");
            mat(it->second, j) += v;
        }
    }
    return mat;
}

// Connected components of the generator's sparsity pattern, restricted to the
// components that intersect the state's support.  Indices the generator never
// touches form singleton components (identity evolution).
std::vector<std::vector<DoubledIndex>> components_touching(const SparseOperator& gen,
                                                           const LiouvilleState& state) {
    std::map<DoubledIndex, DoubledIndex> parent;
    std::function<DoubledIndex(DoubledIndex)> find = [&](DoubledIndex x) {
        auto it = parent.find(x);
        if (it == parent.end()) {
            parent.emplace(x, x);
            return x;
        }
        if (it->second == x) return x;
        DoubledIndex root = find(it->second);
        parent[x] = root;
        return root;
    };
    auto unite = [&](const DoubledIndex& a, const DoubledIndex& b) {
        DoubledIndex ra = find(a), rb = find(b);
        if (!(ra == rb)) parent[ra] = rb;
    };
    gen.for_each_entry([&](const DoubledIndex& row, const DoubledIndex& col, Cplx) {
        unite(row, col);
    });
    for (const auto& [idx, amp] : state.coefficients()) find(idx);

    std::set<DoubledIndex> roots;
    for (const auto& [idx, amp] : state.coefficients()) roots.insert(find(idx));

    std::map<DoubledIndex, std::vector<DoubledIndex>> groups;
    for (const auto& [idx, p] : parent) {
        DoubledIndex r = find(idx);
        if (roots.count(r)) groups[r].push_back(idx);
    }
    std::vector<std::vector<DoubledIndex>> out;
    out.reserve(groups.size());
    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

void record_diagnostics(EvolutionResult& res, double t, const LiouvilleState& s,
                        bool keep_state) {
    res.times.push_back(t);
    res.trace_series.push_back(s.trace());
    res.hermiticity_series.push_back(s.hermiticity_defect());
    res.norm_series.push_back(s.norm2());
    if (keep_state) res.states.push_back(s);
}

struct BlockPlan {
    std::vector<std::vector<DoubledIndex>> bases;
};

BlockPlan plan_blocks(const LiouvilleState& state, const SparseOperator& gen,
                      const OracleOptions& opts) {
    if (state.modes() != gen.modes())
        throw std::invalid_argument("oracle: state/generator mode mismatch");
    if (state.cutoff().max_occupation > gen.cutoff().max_occupation)
        throw std::invalid_argument("oracle: state cutoff exceeds the generator space");
    BlockPlan plan;
    if (!opts.force_dense && gen.sector_preserving()) {
        std::set<std::vector<int>> sectors;
        for (const auto& [idx, amp] : state.coefficients()) sectors.insert(idx.sectors());
        for (const auto& s : sectors)
            plan.bases.push_back(sector_basis(s, gen.cutoff().max_occupation));
    } else {
        plan.bases = components_touching(gen, state);
    }
    for (const auto& basis : plan.bases) {
        if (static_cast<int>(basis.size()) > opts.dense_dimension_cap)
            throw std::runtime_error(
                "oracle: dense block dimension " + std::to_string(basis.size()) +
                " exceeds the cap " + std::to_string(opts.dense_dimension_cap) +
                "; lower the cutoff or raise dense_dimension_cap");
    }
    return plan;
}

}  // namespace

std::vector<SectorBlock> sector_blocks(const SparseOperator& generator,
                                       const std::vector<std::vector<int>>& sectors) {
    if (!generator.sector_preserving())
        throw std::invalid_argument("sector_blocks: generator is not sector-preserving");
    std::vector<SectorBlock> blocks;
    blocks.reserve(sectors.size());
    for (const auto& s : sectors) {
        SectorBlock b;
        b.sector = s;
        b.basis = sector_basis(s, generator.cutoff().max_occupation);
        b.matrix = dense_on_basis(generator, b.basis);
        blocks.push_back(std::move(b));
    }
    return blocks;
}

EvolutionResult evolve_exact(const LiouvilleState& state, const SparseOperator& generator,
                             double t, const OracleOptions& opts) {
    const BlockPlan plan = plan_blocks(state, generator, opts);
    LiouvilleState out(state.modes(), generator.cutoff());
    for (const auto& basis : plan.bases) {
        Eigen::VectorXcd x(basis.size());
        bool any = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            x[i] = state.at(basis[i]);
            any = any || x[i] != Cplx{0.0, 0.0};
        }
        if (!any) continue;
        const Eigen::MatrixXcd e = expm_dense(dense_on_basis(generator, basis) * t);
        const Eigen::VectorXcd y = e * x;
        if (!y.allFinite()) throw std::runtime_error("evolve_exact: non-finite result");
        for (std::size_t i = 0; i < basis.size(); ++i) out.add(basis[i], y[i]);
    }
    EvolutionResult res{std::move(out), {}, {}, {}, {}, {}};
    record_diagnostics(res, t, res.state, false);
    return res;
}

EvolutionResult evolve_exact_grid(const LiouvilleState& state, const SparseOperator& generator,
                                  const std::vector<double>& times, const OracleOptions& opts) {
    if (times.empty()) throw std::invalid_argument("evolve_exact_grid: empty grid");
    const double dt = times.size() > 1 ? times[1] - times[0] : 0.0;
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs((times[k] - times[k - 1]) - dt) > 1e-12 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("evolve_exact_grid: grid must be uniform");

    const BlockPlan plan = plan_blocks(state, generator, opts);

    struct Slot {
        std::vector<DoubledIndex> basis;
        Eigen::MatrixXcd step;
        Eigen::VectorXcd x;
    };
    std::vector<Slot> slots;
    for (const auto& basis : plan.bases) {
        Slot s;
        s.x.resize(basis.size());
        bool any = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            s.x[i] = state.at(basis[i]);
            any = any || s.x[i] != Cplx{0.0, 0.0};
        }
        if (!any) continue;
        s.basis = basis;
        s.step = expm_dense(dense_on_basis(generator, basis) * dt);
        slots.push_back(std::move(s));
    }

    EvolutionResult res{LiouvilleState(state.modes(), generator.cutoff()), {}, {}, {}, {}, {}};
    // advance to times[0] first (grids usually start at 0)
    if (times[0] != 0.0) {
        const OracleOptions sub = opts;
        for (auto& s : slots) {
            Eigen::MatrixXcd e0 = expm_dense(dense_on_basis(generator, s.basis) * times[0]);
            s.x = (e0 * s.x).eval();
        }
        (void)sub;
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0)
            for (auto& s : slots) s.x = (s.step * s.x).eval();
        LiouvilleState snapshot(state.modes(), generator.cutoff());
        for (const auto& s : slots) {
            if (!s.x.allFinite()) throw std::runtime_error("evolve_exact_grid: non-finite result");
            for (std::size_t i = 0; i < s.basis.size(); ++i) snapshot.add(s.basis[i], s.x[i]);
        }
        record_diagnostics(res, times[k], snapshot, opts.keep_states);
        if (k + 1 == times.size()) res.state = std::move(snapshot);
    }
    return res;
}

EvolutionResult evolve_ode(const LiouvilleState& state, const SparseOperator& generator,
                           double t, double step, const OracleOptions& opts) {
    if (!(step > 0)) throw std::invalid_argument("evolve_ode: step must be positive");
    const BlockPlan plan = plan_blocks(state, generator, opts);

    // flat workspace over the union of the involved blocks
    std::vector<DoubledIndex> basis;
    for (const auto& b : plan.bases) basis.insert(basis.end(), b.begin(), b.end());
    std::sort(basis.begin(), basis.end());
    std::map<DoubledIndex, int> pos;
    for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<int>(i);

    // compiled sparse action
    struct Entry {
        int row, col;
        Cplx v;
    };
    std::vector<Entry> entries;
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (const auto& [row, v] : generator.column(basis[j])) {
            auto it = pos.find(row);
            if (it == pos.end()) throw std::logic_error("evolve_ode: generator leaves the basis");
            entries.push_back({it->second, static_cast<int>(j), v});
        }
    auto apply = [&](const Eigen::VectorXcd& x) {
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
        for (const Entry& e : entries) y[e.row] += e.v * x[e.col];
        return y;
    };

    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) x[i] = state.at(basis[i]);

    const int nsteps = std::max(1, static_cast<int>(std::llround(t / step)));
    const double h = t / nsteps;
    for (int k = 0; k < nsteps; ++k) {
        const Eigen::VectorXcd k1 = apply(x);
        const Eigen::VectorXcd k2 = apply(x + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = apply(x + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = apply(x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite())
            throw std::runtime_error("evolve_ode: non-finite state at t = " +
                                     std::to_string((k + 1) * h));
    }

    LiouvilleState out(state.modes(), generator.cutoff());
    for (std::size_t i = 0; i < basis.size(); ++i) out.add(basis[i], x[i]);
    EvolutionResult res{std::move(out), {}, {}, {}, {}, {}};
    record_diagnostics(res, t, res.state, false);
    return res;
}

RelaxationTrajectory damped_oscillator_relaxation(const SystemConfig& config,
                                                  const LiouvilleState& initial,
                                                  const std::vector<double>& t_grid,
                                                  const OracleOptions& opts) {
    config.validate();
    const SparseOperator gen = build_damped_oscillator_liouvillian(config);
    OracleOptions o = opts;
    o.keep_states = true;
    const EvolutionResult evo = evolve_exact_grid(initial, gen, t_grid, o);
    const SparseOperator n_op = number_operator(gen.cutoff(), 1, 0);

    RelaxationTrajectory out;
    out.times = evo.times;
    out.trace_series = evo.trace_series;
    out.hermiticity_series = evo.hermiticity_series;
    for (const auto& s : evo.states) out.occupation.push_back(expectation(n_op, s).real());

    out.monotone_decreasing = true;
    for (std::size_t k = 1; k < out.occupation.size(); ++k)
        if (!(out.occupation[k] < out.occupation[k - 1])) out.monotone_decreasing = false;

    // least-squares line through ln(<n> - nbar) where positive
    std::vector<double> ts, ys;
    for (std::size_t k = 0; k < out.occupation.size(); ++k) {
        const double excess = out.occupation[k] - config.nbar;
        if (excess > 1e-300) {
            ts.push_back(out.times[k]);
            ys.push_back(std::log(excess));
        }
    }
    if (ts.size() >= 2) {
        const double n = double(ts.size());
        const double st = std::accumulate(ts.begin(), ts.end(), 0.0);
        const double sy = std::accumulate(ys.begin(), ys.end(), 0.0);
        double stt = 0, sty = 0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            stt += ts[k] * ts[k];
            sty += ts[k] * ys[k];
        }
        const double denom = n * stt - st * st;
        if (denom > 0) {
            out.fit_rate = (n * sty - st * sy) / denom;
            const double intercept = (sy - out.fit_rate * st) / n;
            for (std::size_t k = 0; k < ts.size(); ++k)
                out.fit_residual = std::max(
                    out.fit_residual, std::abs(ys[k] - (intercept + out.fit_rate * ts[k])));
            out.fit_valid = true;
        }
    }
    return out;
}

}  // namespace tfdkerr
