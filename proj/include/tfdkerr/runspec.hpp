#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "tfdkerr/oracle.hpp"
#include "tfdkerr/propagator.hpp"

namespace tfdkerr {

std::string version_string();

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SystemKind { kerr_su2_damped, coupled_kerr, damped_oscillator_su11 };
enum class EngineKind { closed_form, oracle_exact, oracle_ode, compare };

std::string to_string(SystemKind k);
std::string to_string(EngineKind k);
SystemKind system_from_string(const std::string& s);
EngineKind engine_from_string(const std::string& s);

struct InitialSpec {
    enum class Kind { coherent, thermal, number, coefficients };
    Kind kind = Kind::coherent;
    std::vector<Cplx> alpha;                 // coherent, one per mode
    double nbar = 0.0;                       // thermal
    std::vector<int> number;                 // number, one per mode
    struct Entry {
        std::vector<int> m, n;
        Cplx value;
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> entries;              // explicit coefficient list

    bool operator==(const InitialSpec&) const = default;
};

struct TimeGrid {
    double start = 0.0;
    double end = 0.0;
    int steps = 1;  // number of grid points

    std::vector<double> points() const;
    bool operator==(const TimeGrid&) const = default;
};

struct RunSpec {
    SystemKind system = SystemKind::kerr_su2_damped;
    SystemConfig config;
    InitialSpec initial;
    TimeGrid times;
    EngineKind engine = EngineKind::closed_form;
    bool strict = false;
    double ode_step = 1e-3;
    std::string output = "trajectory.csv";

    void validate() const;  // throws ConfigError
    bool operator==(const RunSpec&) const = default;
};

nlohmann::json runspec_to_json(const RunSpec& spec);
RunSpec runspec_from_json(const nlohmann::json& j);
RunSpec load_runspec(const std::string& path);

// One observable row of the trajectory output; trace and hermiticity defect
// ride along every row of the time point.
struct TrajectoryRow {
    double t = 0.0;
    std::string observable;
    Cplx value;
    Cplx trace;
    double herm_defect = 0.0;
    double max_abs_diff = 0.0;  // compare engine only
};

struct Trajectory {
    std::vector<TrajectoryRow> rows;
    bool has_compare = false;
    nlohmann::json metadata;
};

LiouvilleState build_initial_state(const RunSpec& spec);

// Evolve on the grid with the configured engine and produce the observable
// rows: n[i] and a[i] per mode, purity, plus trace / hermiticity defect
// diagnostics (and the closed-form-vs-oracle entrywise gap for compare runs).
Trajectory run_simulation(const RunSpec& spec, bool with_timestamp = true);

void write_csv(const Trajectory& traj, std::ostream& os);
std::string csv_string(const Trajectory& traj);

}  // namespace tfdkerr
