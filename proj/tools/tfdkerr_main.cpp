// tfdkerr: evolve density operators of damped Kerr media in the doubled
// Fock space, through the closed-form disentangled propagator or the dense
// matrix-exponential engine, and run the validation suites.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tfdkerr/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

int run_simulate(const std::string& config_path, const std::string& out_override,
                 const std::string& engine_override, bool strict, bool no_timestamp) {
    tfdkerr::RunSpec spec = tfdkerr::load_runspec(config_path);
    if (!engine_override.empty()) spec.engine = tfdkerr::engine_from_string(engine_override);
    if (strict) spec.strict = true;
    if (!out_override.empty()) spec.output = out_override;
    spec.validate();

    const tfdkerr::Trajectory traj = tfdkerr::run_simulation(spec, !no_timestamp);

    std::ofstream csv(spec.output, std::ios::binary);
    if (!csv) throw tfdkerr::ConfigError("cannot write output file: " + spec.output);
    tfdkerr::write_csv(traj, csv);
    std::ofstream meta(spec.output + ".meta.json", std::ios::binary);
    meta << traj.metadata.dump(2) << "\n";
    std::cout << "wrote " << traj.rows.size() << " rows to " << spec.output << "\n";
    return kExitOk;
}

int run_bench(std::ostream& os) {
    using Clock = std::chrono::steady_clock;
    os << "engine, modes, cutoff, run, seconds\n";
    for (int modes : {1, 2}) {
        for (int cutoff : {10, 20, 40, 80}) {
            if (modes == 2 && cutoff > 20) {
                os << "all, 2, " << cutoff << ", -, skipped (space too large)\n";
                continue;
            }
            tfdkerr::SystemConfig cfg;
            cfg.mode_count = modes;
            cfg.omega.assign(modes, 1.0);
            cfg.gamma.assign(modes, 0.3);
            cfg.chi.assign(modes, std::vector<double>(modes, 0.1));
            for (int i = 0; i < modes; ++i) cfg.chi[i][i] = 0.5;
            cfg.cutoff = tfdkerr::FockCutoff(cutoff);

            std::vector<tfdkerr::Cplx> alpha(modes, tfdkerr::Cplx{1.0, 0.0});
            tfdkerr::LiouvilleState initial = tfdkerr::coherent_state_rho(alpha, cfg.cutoff);
            initial.compress(1e-14);
            const double t = 0.5;

            for (int rep = 0; rep < 3; ++rep) {
                const auto t0 = Clock::now();
                (void)tfdkerr::propagate_closed_form_multimode(initial, cfg, t);
                os << "closed_form, " << modes << ", " << cutoff << ", " << rep << ", "
                   << std::chrono::duration<double>(Clock::now() - t0).count() << "\n";
            }

            const tfdkerr::SparseOperator gen =
                tfdkerr::build_damped_su2_hat_H(cfg, tfdkerr::sector_complete_cutoff(initial));
            for (int rep = 0; rep < 3; ++rep) {
                const auto t0 = Clock::now();
                (void)tfdkerr::evolve_exact(initial, gen, t);
                os << "sector_exact, " << modes << ", " << cutoff << ", " << rep << ", "
                   << std::chrono::duration<double>(Clock::now() - t0).count() << "\n";
            }

            // monolithic dense exponential of the whole truncated matrix
            const long dim = [&] {
                long v = 1;
                for (int i = 0; i < 2 * modes; ++i) v *= cutoff;
                return v;
            }();
            if (dim > 4096) {
                os << "dense_full, " << modes << ", " << cutoff
                   << ", -, skipped (dimension cap 4096)\n";
                continue;
            }
            std::vector<tfdkerr::DoubledIndex> basis;
            std::map<tfdkerr::DoubledIndex, int> pos;
            const tfdkerr::SparseOperator gen_cfg = tfdkerr::build_damped_su2_hat_H(cfg);
            Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
            gen_cfg.for_each_entry(
                [&](const tfdkerr::DoubledIndex& row, const tfdkerr::DoubledIndex& col,
                    tfdkerr::Cplx v) {
                    if (!pos.count(row)) { pos[row] = int(basis.size()); basis.push_back(row); }
                    if (!pos.count(col)) { pos[col] = int(basis.size()); basis.push_back(col); }
                    full(pos[row], pos[col]) += v;
                });
            for (int rep = 0; rep < 2; ++rep) {
                const auto t0 = Clock::now();
                (void)tfdkerr::expm_dense(full * t);
                os << "dense_full, " << modes << ", " << cutoff << ", " << rep << ", "
                   << std::chrono::duration<double>(Clock::now() - t0).count() << "\n";
            }
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"damped Kerr medium simulator in the doubled Fock space"};
    app.require_subcommand(1);

    std::string config_path, out_path, engine_override, suite = "all";
    bool strict = false, no_timestamp = false;

    CLI::App* simulate = app.add_subcommand("simulate", "evolve a configured system");
    simulate->add_option("--config", config_path, "run configuration (JSON)")->required();
    simulate->add_option("--out", out_path, "output CSV path (overrides the config)");
    simulate->add_option("--engine", engine_override,
                         "closed_form | oracle_exact | oracle_ode | compare");
    simulate->add_flag("--strict", strict, "disable term pruning; reproducible output");
    simulate->add_flag("--no-timestamp", no_timestamp, "omit the metadata timestamp");

    CLI::App* compare = app.add_subcommand(
        "compare", "simulate with the closed form and the exact engine side by side");
    compare->add_option("--config", config_path, "run configuration (JSON)")->required();
    compare->add_option("--out", out_path, "output CSV path (overrides the config)");
    compare->add_flag("--strict", strict, "disable term pruning; reproducible output");
    compare->add_flag("--no-timestamp", no_timestamp, "omit the metadata timestamp");

    CLI::App* validate = app.add_subcommand("validate", "run a property suite");
    validate->add_option("--suite", suite,
                         "algebra | gauss | propagator | multimode | baseline | all");

    CLI::App* bench = app.add_subcommand("bench", "time the evolution engines");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return run_simulate(config_path, out_path, engine_override, strict, no_timestamp);
        if (compare->parsed())
            return run_simulate(config_path, out_path, "compare", strict, no_timestamp);
        if (validate->parsed()) {
            const auto results = tfdkerr::validate_suite(suite);
            return tfdkerr::print_report(results, std::cout) == 0 ? kExitOk
                                                                  : kExitValidationFailed;
        }
        if (bench->parsed()) return run_bench(std::cout);
    } catch (const tfdkerr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const tfdkerr::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumericError;
    }
    return kExitOk;
}
