#include "carlbm/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "carlbm/carleman_lbm.hpp"
#include "carlbm/carleman_ode.hpp"
#include "carlbm/cost_model.hpp"
#include "carlbm/io.hpp"
#include "carlbm/lattice.hpp"
#include "carlbm/quantum_streaming.hpp"

namespace carlbm::cli {

namespace fs = std::filesystem;
using io::format_double;
using io::format_double12;
using io::KeyValueConfig;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    long seed = -1;  // -1: take the config's seed
    int threads = 1;
};

KeyValueConfig load_config(const CommonArgs& args) {
    if (args.config_path.empty()) return KeyValueConfig::parse_string("");
    return KeyValueConfig::parse_file(args.config_path);
}

fs::path ensure_out_dir(const CommonArgs& args) {
    fs::path dir(args.out_dir);
    fs::create_directories(dir);
    return dir;
}

long effective_seed(const CommonArgs& args, const KeyValueConfig& cfg) {
    return args.seed >= 0 ? args.seed : cfg.get_int("seed", 12345);
}

std::string field_csv(const lattice::DistributionField& f) {
    std::string out = "i,x,y,f\n";
    for (int i = 0; i < lattice::VelocitySet::q; ++i)
        for (int x = 0; x < f.nx; ++x)
            for (int y = 0; y < f.ny; ++y)
                out += std::to_string(i) + "," + std::to_string(x) + "," + std::to_string(y) +
                       "," + format_double(f(i, x, y)) + "\n";
    return out;
}

std::string macro_csv(const lattice::DistributionField& f) {
    const auto m = lattice::macro_fields(f);
    std::string out = "x,y,rho,ux,uy\n";
    for (int x = 0; x < f.nx; ++x)
        for (int y = 0; y < f.ny; ++y) {
            const std::size_t s = static_cast<std::size_t>(x) * f.ny + y;
            out += std::to_string(x) + "," + std::to_string(y) + "," + format_double(m.rho[s]) +
                   "," + format_double(m.ux[s]) + "," + format_double(m.uy[s]) + "\n";
        }
    return out;
}

int cmd_run_lbm(const CommonArgs& args) {
    const KeyValueConfig cfg = load_config(args);
    cfg.require_known({"nx", "ny", "tau", "u0", "n_modes", "steps", "seed"});
    lattice::LatticeConfig lc;
    lc.nx = static_cast<int>(cfg.get_int("nx", 32));
    lc.ny = static_cast<int>(cfg.get_int("ny", 32));
    lc.tau = cfg.get_double("tau", 0.55);
    const double u0 = cfg.get_double("u0", 0.05);
    const int n_modes = static_cast<int>(cfg.get_int("n_modes", 1));
    const int steps = static_cast<int>(cfg.get_int("steps", 100));
    (void)effective_seed(args, cfg);  // run is deterministic; seed kept for the contract

    const fs::path dir = ensure_out_dir(args);
    lattice::DistributionField f = lattice::init_kolmogorov(lc, u0, n_modes);
    io::write_text_file((dir / "fields_initial.csv").string(), field_csv(f));
    io::write_text_file((dir / "macro_initial.csv").string(), macro_csv(f));

    std::string energy = "t,energy\n";
    std::vector<double> ts{0.0}, es{lattice::kinetic_energy(f)};
    energy += "0," + format_double12(es[0]) + "\n";
    for (int t = 1; t <= steps; ++t) {
        f = lattice::lbm_step(f, lc);
        const double e = lattice::kinetic_energy(f);
        energy += std::to_string(t) + "," + format_double12(e) + "\n";
        ts.push_back(t);
        es.push_back(e);
    }
    io::write_text_file((dir / "energy.csv").string(), energy);
    io::write_text_file(
        (dir / "energy.svg").string(),
        io::render_line_chart({{"kinetic energy", ts, es}},
                              {"Decaying shear: kinetic energy", "step", "energy", false, false}));
    if (steps > 0) {
        io::write_text_file((dir / "fields_final.csv").string(), field_csv(f));
        io::write_text_file((dir / "macro_final.csv").string(), macro_csv(f));
    }
    return 0;
}

int cmd_carleman_sweep(const CommonArgs& args) {
    const KeyValueConfig cfg = load_config(args);
    cfg.require_known({"nx", "ny", "u0", "n_modes", "steps", "re_list", "window", "order", "seed"});
    carleman::SweepSetup setup;
    setup.nx = static_cast<int>(cfg.get_int("nx", 16));
    setup.ny = static_cast<int>(cfg.get_int("ny", 16));
    setup.u0 = cfg.get_double("u0", 0.05);
    setup.n_modes = static_cast<int>(cfg.get_int("n_modes", 1));
    setup.steps = static_cast<int>(cfg.get_int("steps", 500));
    carleman::CarlemanConfig ccfg;
    ccfg.order = static_cast<int>(cfg.get_int("order", 2));
    ccfg.window = static_cast<int>(cfg.get_int("window", 4));
    const std::vector<double> re_list = cfg.get_double_list("re_list", {10.0, 25.0, 50.0, 100.0});
    (void)effective_seed(args, cfg);

    carleman::SweepOptions opts;
    opts.threads = args.threads;
    std::vector<std::vector<double>> series;
    const auto rows = carleman::reynolds_sweep(re_list, setup, ccfg, opts, &series);

    const fs::path dir = ensure_out_dir(args);
    std::string csv = "Re,tau,steps,mean_epsilon,max_epsilon,leakage\n";
    for (const auto& r : rows)
        csv += format_double12(r.re) + "," + format_double12(r.tau) + "," +
               std::to_string(r.steps_done) + "," + format_double12(r.mean_epsilon) + "," +
               format_double12(r.max_epsilon) + "," + format_double12(r.leakage) + "\n";
    io::write_text_file((dir / "sweep.csv").string(), csv);

    std::vector<io::Series> eps_series;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::string trace = "t,epsilon\n";
        io::Series s;
        s.name = "Re=" + format_double12(rows[r].re);
        for (std::size_t t = 0; t < series[r].size(); ++t) {
            trace += std::to_string(t + 1) + "," + format_double12(series[r][t]) + "\n";
            s.x.push_back(static_cast<double>(t + 1));
            s.y.push_back(series[r][t]);
        }
        std::ostringstream name;
        name << "epsilon_re" << format_double12(rows[r].re) << ".csv";
        io::write_text_file((dir / name.str()).string(), trace);
        eps_series.push_back(std::move(s));
    }
    io::write_text_file((dir / "epsilon_t.svg").string(),
                        io::render_line_chart(eps_series, {"Carleman deviation in time", "step",
                                                           "epsilon", false, true}));

    io::Series mean_s{"mean epsilon", {}, {}};
    for (const auto& r : rows)
        if (!r.flagged) {
            mean_s.x.push_back(r.re);
            mean_s.y.push_back(r.mean_epsilon);
        }
    io::write_text_file((dir / "sweep.svg").string(),
                        io::render_line_chart({mean_s}, {"Mean deviation vs Reynolds number", "Re",
                                                         "mean epsilon", false, true}));
    return 0;
}

int cmd_burgers(const CommonArgs& args) {
    const KeyValueConfig cfg = load_config(args);
    cfg.require_known({"n", "nu", "length", "u0", "dt", "steps", "k_list", "seed"});
    const int n = static_cast<int>(cfg.get_int("n", 16));
    const double nu = cfg.get_double("nu", 0.05);
    const double length = cfg.get_double("length", 1.0);
    const double u0 = cfg.get_double("u0", 1.0);
    const int steps = static_cast<int>(cfg.get_int("steps", 4000));
    const std::vector<long> k_list_l = cfg.get_int_list("k_list", {1, 2, 3, 4});
    (void)effective_seed(args, cfg);

    const auto sys = ode::burgers_system(n, nu, length);
    // Default dt: diffusive scale 0.1 h^2/nu capped by the advective CFL.
    const double h = length / n;
    const double dt_default = std::min(0.1 * h * h / nu, 0.2 * h / std::max(std::abs(u0), 1e-12));
    const double dt = cfg.get_double("dt", dt_default);

    Eigen::VectorXd y0(n);
    for (int l = 0; l < n; ++l) y0[l] = u0 * std::sin(2.0 * std::numbers::pi * l / n);

    std::vector<int> k_list(k_list_l.begin(), k_list_l.end());
    const auto rows = ode::truncation_error(sys, y0, dt, steps, k_list);

    const fs::path dir = ensure_out_dir(args);
    std::string csv = "k,error\n";
    io::Series s{"final-time error", {}, {}};
    for (const auto& r : rows) {
        csv += std::to_string(r.order) + "," + format_double12(r.error) + "\n";
        s.x.push_back(r.order);
        s.y.push_back(r.error);
    }
    io::write_text_file((dir / "truncation.csv").string(), csv);
    io::write_text_file(
        (dir / "truncation.svg").string(),
        io::render_line_chart(
            {s}, {"Burgers: Carleman truncation error (Re=" +
                      format_double12(ode::burgers_reynolds(u0, length, nu)) + ")",
                  "Carleman order k", "relative error", false, true}));

    // Reference trajectory snapshot for inspection: t,x,u at a few times.
    const auto ref = ode::integrate_reference(sys, y0, dt, steps);
    std::string traj = "t,x,u\n";
    for (int snap = 0; snap <= 4; ++snap) {
        const std::size_t t = static_cast<std::size_t>(snap) * steps / 4;
        for (int l = 0; l < n; ++l)
            traj += format_double12(t * dt) + "," + format_double12(l * h) + "," +
                    format_double12(ref[t][l]) + "\n";
    }
    io::write_text_file((dir / "trajectory.csv").string(), traj);
    return 0;
}

int cmd_verify_streaming(const CommonArgs& args) {
    const KeyValueConfig cfg = load_config(args);
    cfg.require_known({"seed", "fields", "inject_fault"});
    const long seed = effective_seed(args, cfg);
    const int nfields = static_cast<int>(cfg.get_int("fields", 20));
    const bool inject_fault = cfg.get_int("inject_fault", 0) != 0;

    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::uniform_real_distribution<double> dist(0.05, 1.0);

    std::ostringstream report;
    bool all_ok = true;
    for (int side : {2, 4, 8}) {
        lattice::LatticeConfig lc{side, side, 1.0};
        const auto layout = quantum::layout_for(lc);
        report << "grid " << side << "x" << side << " (Q=" << layout.total() << ")\n";

        // Gate-count table per S_i.
        report << "  i  gates  cx_equivalent\n";
        for (int i = 0; i < lattice::VelocitySet::q; ++i) {
            auto circ = quantum::streaming_circuit(i, layout);
            const auto gc = quantum::gate_counts(circ);
            report << "  " << i << "  " << gc.total_gates << "  " << gc.cx_equivalent << "\n";
        }

        auto full = quantum::full_streaming_circuit(layout);
        if (inject_fault && !full.gates.empty()) {
            // Negative control flipped on purpose; the verifier must catch it.
            full.gates[0].controls[0].positive = !full.gates[0].controls[0].positive;
        }

        for (int trial = 0; trial < nfields; ++trial) {
            lattice::DistributionField f(side, side);
            for (auto& v : f.f) v = dist(rng);
            const auto enc = quantum::encode(f);
            const auto out = quantum::apply_circuit(full, enc);

            double norm = 0.0;
            for (const auto& a : out.amplitudes) norm += std::norm(a);
            if (std::abs(std::sqrt(norm) - 1.0) > 1e-14) {
                report << "  FAIL: norm deviates by " << format_double(std::sqrt(norm) - 1.0)
                       << " on trial " << trial << "\n";
                all_ok = false;
                break;
            }
            for (std::uint64_t idx = 0; idx < out.amplitudes.size(); ++idx) {
                if ((idx & 0xF) >= 9 && out.amplitudes[idx] != std::complex<double>(0.0, 0.0)) {
                    report << "  FAIL: invalid velocity slot " << idx << " became nonzero\n";
                    all_ok = false;
                    break;
                }
            }

            const auto decoded = quantum::decode(out);
            const auto expected = lattice::stream(f, lc);
            double max_diff = 0.0;
            int bad_i = -1, bad_x = -1, bad_y = -1;
            for (int i = 0; i < lattice::VelocitySet::q; ++i)
                for (int x = 0; x < side; ++x)
                    for (int y = 0; y < side; ++y) {
                        const double d = std::abs(decoded(i, x, y) - expected(i, x, y));
                        if (d > max_diff) {
                            max_diff = d;
                            bad_i = i;
                            bad_x = x;
                            bad_y = y;
                        }
                    }
            if (max_diff > 1e-12) {
                report << "  FAIL: trial " << trial << " first differing amplitude at (i=" << bad_i
                       << ",x=" << bad_x << ",y=" << bad_y << "): got "
                       << format_double(decoded(bad_i, bad_x, bad_y)) << " want "
                       << format_double(expected(bad_i, bad_x, bad_y)) << " (|diff| "
                       << format_double(max_diff) << ")\n";
                all_ok = false;
                break;
            }
        }
        report << (all_ok ? "  streaming equivalence: pass\n" : "");
        if (!all_ok) break;
    }
    report << (all_ok ? "ALL PASS\n" : "FAILURES DETECTED\n");

    const fs::path dir = ensure_out_dir(args);
    io::write_text_file((dir / "verify_streaming.txt").string(), report.str());
    std::cout << report.str();
    return all_ok ? 0 : 1;
}

int cmd_emit_circuit(const CommonArgs& args) {
    const KeyValueConfig cfg = load_config(args);
    cfg.require_known({"nx", "ny", "velocity", "seed"});
    lattice::LatticeConfig lc;
    lc.nx = static_cast<int>(cfg.get_int("nx", 8));
    lc.ny = static_cast<int>(cfg.get_int("ny", 8));
    const long which = cfg.get_int("velocity", -1);
    const auto layout = quantum::layout_for(lc);

    std::string out;
    auto emit = [&](int i) {
        const auto c = quantum::streaming_circuit(i, layout);
        out += "# S_" + std::to_string(i) + " on " + std::to_string(lc.nx) + "x" +
               std::to_string(lc.ny) + " (Q=" + std::to_string(layout.total()) + ")\n";
        out += quantum::circuit_to_text(c);
    };
    if (which >= 0)
        emit(static_cast<int>(which));
    else
        for (int i = 1; i < lattice::VelocitySet::q; ++i) emit(i);

    const fs::path dir = ensure_out_dir(args);
    io::write_text_file((dir / "circuits.txt").string(), out);
    return 0;
}

int cmd_emit_costs(const CommonArgs& args) {
    const KeyValueConfig cfg = load_config(args);
    cfg.require_known({"re_list", "grids", "precision", "g", "k", "kappa", "seed"});
    const std::vector<double> re_list = cfg.get_double_list("re_list", {});
    const std::vector<long> grids = cfg.get_int_list("grids", {});

    cost::CostReport rep;
    for (double re : re_list)
        rep.add("qubits_re_" + format_double12(re),
                static_cast<std::uint64_t>(cost::qubit_estimate(re)), "ceil(3 log2 Re)");
    for (long side : grids) {
        lattice::LatticeConfig lc{static_cast<int>(side), static_cast<int>(side), 1.0};
        const auto layout = quantum::layout_for(lc);
        const auto gc = quantum::gate_counts(quantum::full_streaming_circuit(layout));
        const std::string g = std::to_string(side) + "x" + std::to_string(side);
        rep.add("streaming_qubits_" + g, static_cast<std::uint64_t>(layout.total()),
                "vq + log2 nx + log2 ny");
        rep.add("streaming_cx_equivalent_" + g, gc.cx_equivalent,
                "sum over streaming gates of the decomposition table");
        rep.add("generic_unitary_bound_" + g, cost::pow4_decimal(layout.total()),
                "4^Q two-qubit gates for a generic unitary");
    }
    if (cfg.has("k")) {
        const int k = static_cast<int>(cfg.get_int("k", 2));
        rep.add("registers_collision_only_k" + std::to_string(k),
                static_cast<std::uint64_t>(cost::carleman_register_count(k, false)), "k+1");
        rep.add("registers_fully_quantum_k" + std::to_string(k),
                static_cast<std::uint64_t>(cost::carleman_register_count(k, true)), "2(k+1)");
        if (cfg.has("g") && cfg.has("kappa"))
            rep.add("carleman_variables_k" + std::to_string(k),
                    cost::carleman_variable_count(cfg.get_int("g", 1), cfg.get_int("kappa", 9), k),
                    "G kappa^(k-1)");
    }
    if (cfg.has("g") && cfg.has("precision")) {
        const auto frag = cost::hybrid_step_cost(static_cast<std::uint64_t>(cfg.get_int("g", 64)),
                                                 cfg.get_double("precision", 0.01));
        rep.figures.insert(rep.figures.end(), frag.figures.begin(), frag.figures.end());
    }

    const fs::path dir = ensure_out_dir(args);
    io::write_text_file((dir / "costs.csv").string(), rep.to_csv());
    io::write_text_file((dir / "costs.txt").string(), rep.to_text());
    return 0;
}

}  // namespace

int run_main(int argc, char** argv) {
    CLI::App app{"Carleman lattice Boltzmann workbench"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "key=value config file");
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--seed", args.seed, "seed override");
        sub->add_option("--threads", args.threads, "worker threads for sweep rows");
    };

    auto* lbm = app.add_subcommand("run-lbm", "reference D2Q9 run with snapshots and energy");
    auto* sweep = app.add_subcommand("carleman-sweep", "side-by-side LB/Carleman Reynolds sweep");
    auto* burgers = app.add_subcommand("burgers", "Burgers Carleman truncation study");
    auto* verify = app.add_subcommand("verify-streaming", "streaming-circuit verification suite");
    auto* emitc = app.add_subcommand("emit-circuit", "export streaming circuits as text");
    auto* costs = app.add_subcommand("emit-costs", "closed-form resource estimates");
    for (auto* sub : {lbm, sweep, burgers, verify, emitc, costs}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (lbm->parsed()) return cmd_run_lbm(args);
        if (sweep->parsed()) return cmd_carleman_sweep(args);
        if (burgers->parsed()) return cmd_burgers(args);
        if (verify->parsed()) return cmd_verify_streaming(args);
        if (emitc->parsed()) return cmd_emit_circuit(args);
        if (costs->parsed()) return cmd_emit_costs(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace carlbm::cli
