#include "tfdkerr/runspec.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tfdkerr {

std::string version_string() { return "tfdkerr 0.1.0"; }

std::string to_string(SystemKind k) {
    switch (k) {
        case SystemKind::kerr_su2_damped: return "kerr_su2_damped";
        case SystemKind::coupled_kerr: return "coupled_kerr";
        case SystemKind::damped_oscillator_su11: return "damped_oscillator_su11";
    }
    return "?";
}

std::string to_string(EngineKind k) {
    switch (k) {
        case EngineKind::closed_form: return "closed_form";
        case EngineKind::oracle_exact: return "oracle_exact";
        case EngineKind::oracle_ode: return "oracle_ode";
        case EngineKind::compare: return "compare";
    }
    return "?";
}

SystemKind system_from_string(const std::string& s) {
    if (s == "kerr_su2_damped") return SystemKind::kerr_su2_damped;
    if (s == "coupled_kerr") return SystemKind::coupled_kerr;
    if (s == "damped_oscillator_su11") return SystemKind::damped_oscillator_su11;
    throw ConfigError("unknown system: " + s);
}

EngineKind engine_from_string(const std::string& s) {
    if (s == "closed_form") return EngineKind::closed_form;
    if (s == "oracle_exact") return EngineKind::oracle_exact;
    if (s == "oracle_ode") return EngineKind::oracle_ode;
    if (s == "compare") return EngineKind::compare;
    throw ConfigError("unknown engine: " + s);
}

std::vector<double> TimeGrid::points() const {
    std::vector<double> p(steps);
    const double dt = steps > 1 ? (end - start) / double(steps - 1) : 0.0;
    for (int k = 0; k < steps; ++k) p[k] = start + dt * k;
    return p;
}

void RunSpec::validate() const {
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (times.end < times.start) throw ConfigError("times: end must be >= start");
    if (times.steps < 1) throw ConfigError("times: steps must be >= 1");
    if (!(ode_step > 0)) throw ConfigError("ode_step must be positive");
    if (system == SystemKind::damped_oscillator_su11 &&
        (engine == EngineKind::closed_form || engine == EngineKind::compare))
        throw ConfigError("damped_oscillator_su11 has no closed-form engine");
    if (system != SystemKind::coupled_kerr && config.mode_count != 1)
        throw ConfigError(to_string(system) + " is a single-mode system");
    const int N = config.mode_count;
    switch (initial.kind) {
        case InitialSpec::Kind::coherent:
            if (static_cast<int>(initial.alpha.size()) != N)
                throw ConfigError("initial.alpha needs one entry per mode");
            break;
        case InitialSpec::Kind::number:
            if (static_cast<int>(initial.number.size()) != N)
                throw ConfigError("initial.number needs one entry per mode");
            break;
        case InitialSpec::Kind::thermal:
            if (initial.nbar < 0) throw ConfigError("initial.nbar must be >= 0");
            break;
        case InitialSpec::Kind::coefficients:
            if (initial.entries.empty()) throw ConfigError("initial.entries must not be empty");
            for (const auto& e : initial.entries)
                if (static_cast<int>(e.m.size()) != N || static_cast<int>(e.n.size()) != N)
                    throw ConfigError("initial.entries labels need one register per mode");
            break;
    }
}

namespace {

nlohmann::json cplx_to_json(Cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Cplx cplx_from_json(const nlohmann::json& j) {
    if (j.is_number()) return Cplx{j.get<double>(), 0.0};
    return Cplx{j.at("re").get<double>(), j.value("im", 0.0)};
}

}  // namespace

nlohmann::json runspec_to_json(const RunSpec& spec) {
    nlohmann::json j;
    j["system"] = to_string(spec.system);
    j["config"] = {{"modes", spec.config.mode_count},
                   {"omega", spec.config.omega},
                   {"chi", spec.config.chi},
                   {"gamma", spec.config.gamma},
                   {"kappa", spec.config.kappa},
                   {"nbar", spec.config.nbar},
                   {"cutoff", spec.config.cutoff.max_occupation}};
    nlohmann::json init;
    switch (spec.initial.kind) {
        case InitialSpec::Kind::coherent: {
            init["type"] = "coherent";
            nlohmann::json a = nlohmann::json::array();
            for (Cplx z : spec.initial.alpha) a.push_back(cplx_to_json(z));
            init["alpha"] = a;
            break;
        }
        case InitialSpec::Kind::thermal:
            init["type"] = "thermal";
            init["nbar"] = spec.initial.nbar;
            break;
        case InitialSpec::Kind::number:
            init["type"] = "number";
            init["k"] = spec.initial.number;
            break;
        case InitialSpec::Kind::coefficients: {
            init["type"] = "coefficients";
            nlohmann::json list = nlohmann::json::array();
            for (const auto& e : spec.initial.entries)
                list.push_back({{"m", e.m}, {"n", e.n}, {"value", cplx_to_json(e.value)}});
            init["entries"] = list;
            break;
        }
    }
    j["initial"] = init;
    j["times"] = {{"start", spec.times.start}, {"end", spec.times.end}, {"steps", spec.times.steps}};
    j["engine"] = to_string(spec.engine);
    j["strict"] = spec.strict;
    j["ode_step"] = spec.ode_step;
    j["output"] = spec.output;
    return j;
}

RunSpec runspec_from_json(const nlohmann::json& j) {
    RunSpec spec;
    try {
        spec.system = system_from_string(j.at("system").get<std::string>());
        const auto& c = j.at("config");
        spec.config.mode_count = c.at("modes").get<int>();
        spec.config.omega = c.at("omega").get<std::vector<double>>();
        spec.config.chi = c.at("chi").get<std::vector<std::vector<double>>>();
        spec.config.gamma = c.at("gamma").get<std::vector<double>>();
        spec.config.kappa = c.value("kappa", 0.0);
        spec.config.nbar = c.value("nbar", 0.0);
        spec.config.cutoff = FockCutoff(c.at("cutoff").get<int>());

        const auto& init = j.at("initial");
        const std::string type = init.at("type").get<std::string>();
        if (type == "coherent") {
            spec.initial.kind = InitialSpec::Kind::coherent;
            for (const auto& a : init.at("alpha")) spec.initial.alpha.push_back(cplx_from_json(a));
        } else if (type == "thermal") {
            spec.initial.kind = InitialSpec::Kind::thermal;
            spec.initial.nbar = init.at("nbar").get<double>();
        } else if (type == "number") {
            spec.initial.kind = InitialSpec::Kind::number;
            spec.initial.number = init.at("k").get<std::vector<int>>();
        } else if (type == "coefficients") {
            spec.initial.kind = InitialSpec::Kind::coefficients;
            for (const auto& e : init.at("entries")) {
                InitialSpec::Entry entry;
                entry.m = e.at("m").get<std::vector<int>>();
                entry.n = e.at("n").get<std::vector<int>>();
                entry.value = cplx_from_json(e.at("value"));
                spec.initial.entries.push_back(std::move(entry));
            }
        } else {
            throw ConfigError("unknown initial state type: " + type);
        }

        const auto& t = j.at("times");
        spec.times.start = t.at("start").get<double>();
        spec.times.end = t.at("end").get<double>();
        spec.times.steps = t.at("steps").get<int>();
        spec.engine = engine_from_string(j.at("engine").get<std::string>());
        spec.strict = j.value("strict", false);
        spec.ode_step = j.value("ode_step", 1e-3);
        spec.output = j.value("output", std::string("trajectory.csv"));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    spec.validate();
    return spec;
}

RunSpec load_runspec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return runspec_from_json(j);
}

LiouvilleState build_initial_state(const RunSpec& spec) {
    const FockCutoff cutoff = spec.config.cutoff;
    const int N = spec.config.mode_count;
    switch (spec.initial.kind) {
        case InitialSpec::Kind::coherent:
            return coherent_state_rho(spec.initial.alpha, cutoff);
        case InitialSpec::Kind::thermal:
            return thermal_state_rho(spec.initial.nbar, cutoff, N);
        case InitialSpec::Kind::number:
            return number_state_rho(spec.initial.number, cutoff);
        case InitialSpec::Kind::coefficients: {
            LiouvilleState s(N, cutoff);
            for (const auto& e : spec.initial.entries)
                s.add(DoubledIndex(e.m, e.n), e.value);
            return s;
        }
    }
    throw ConfigError("bad initial state");
}

namespace {

SparseOperator build_generator(const RunSpec& spec, FockCutoff space) {
    switch (spec.system) {
        case SystemKind::kerr_su2_damped:
        case SystemKind::coupled_kerr:
            return build_damped_su2_hat_H(spec.config, space);
        case SystemKind::damped_oscillator_su11:
            return build_damped_oscillator_liouvillian(spec.config);
    }
    throw ConfigError("bad system");
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

}  // namespace

Trajectory run_simulation(const RunSpec& spec, bool with_timestamp) {
    spec.validate();
    const LiouvilleState initial = build_initial_state(spec);

    // Space: complete excitation sectors for the spin systems, the config
    // register range for the damped-oscillator baseline.
    const FockCutoff space = spec.system == SystemKind::damped_oscillator_su11
                                 ? spec.config.cutoff
                                 : sector_complete_cutoff(initial);

    const std::vector<double> grid = spec.times.points();
    const int N = spec.config.mode_count;

    const bool needs_closed =
        spec.engine == EngineKind::closed_form || spec.engine == EngineKind::compare;
    const bool needs_oracle = spec.engine != EngineKind::closed_form;

    std::vector<LiouvilleState> closed_states, oracle_states;
    try {
        if (needs_closed) {
            PropagateOptions opts;
            opts.strict = spec.strict;
            for (double t : grid)
                closed_states.push_back(
                    propagate_closed_form_multimode(initial, spec.config, t, opts));
        }
        if (needs_oracle) {
            const SparseOperator gen = build_generator(spec, space);
            if (spec.engine == EngineKind::oracle_ode) {
                LiouvilleState current = initial.with_cutoff(space);
                double t_prev = 0.0;
                for (double t : grid) {
                    if (t != t_prev)
                        current = evolve_ode(current, gen, t - t_prev, spec.ode_step).state;
                    oracle_states.push_back(current);
                    t_prev = t;
                }
            } else {
                OracleOptions opts;
                opts.keep_states = true;
                oracle_states = evolve_exact_grid(initial, gen, grid, opts).states;
            }
        }
    } catch (const std::runtime_error& e) {
        throw NumericError(e.what());
    }

    const std::vector<LiouvilleState>& primary =
        needs_closed ? closed_states : oracle_states;

    // observables on the common space
    std::vector<SparseOperator> n_ops, a_ops;
    for (int i = 0; i < N; ++i) {
        n_ops.push_back(number_operator(space, N, i));
        a_ops.push_back(ladder_operators(space, N, i).a);
    }

    Trajectory traj;
    traj.has_compare = spec.engine == EngineKind::compare;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const LiouvilleState& s = primary[k].with_cutoff(space);
        const Cplx tr = s.trace();
        const double herm = s.hermiticity_defect();
        double diff = 0.0;
        if (traj.has_compare) diff = max_abs_difference(closed_states[k], oracle_states[k]);
        auto push = [&](const std::string& name, Cplx value) {
            traj.rows.push_back({grid[k], name, value, tr, herm, diff});
        };
        for (int i = 0; i < N; ++i)
            push("n[" + std::to_string(i) + "]", expectation(n_ops[i], s));
        for (int i = 0; i < N; ++i)
            push("a[" + std::to_string(i) + "]", expectation(a_ops[i], s));
        push("purity", Cplx{s.purity(), 0.0});
    }

    traj.metadata["run"] = runspec_to_json(spec);
    traj.metadata["engine"] = to_string(spec.engine);
    traj.metadata["version"] = version_string();
    traj.metadata["expm"] = "eigen-matrixfunctions-pade-scaling-squaring";
    if (with_timestamp) traj.metadata["timestamp"] = iso_timestamp();
    return traj;
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_csv(const Trajectory& traj, std::ostream& os) {
    os << "t,observable,re,im,trace_re,trace_im,herm_defect";
    if (traj.has_compare) os << ",max_abs_diff";
    os << "\n";
    for (const auto& r : traj.rows) {
        os << fmt(r.t) << ',' << r.observable << ',' << fmt(r.value.real()) << ','
           << fmt(r.value.imag()) << ',' << fmt(r.trace.real()) << ',' << fmt(r.trace.imag())
           << ',' << fmt(r.herm_defect);
        if (traj.has_compare) os << ',' << fmt(r.max_abs_diff);
        os << "\n";
    }
}

std::string csv_string(const Trajectory& traj) {
    std::ostringstream os;
    write_csv(traj, os);
    return os.str();
}

}  // namespace tfdkerr
