#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "opflab/report.hpp"

using namespace opflab;

int main(int argc, char** argv) {
    CLI::App app{"opflab: desk-scale certification of measurement-postulate structure"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env = std::getenv("OPFLAB_SEED"))
        cfg.seed = std::strtoull(env, nullptr, 10);

    // config file loads before flag parsing, so flags override file values
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) config_path = arg.substr(9);
    }
    try {
        if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    bool want_table = cfg.format == "table";
    bool want_json = false;
    app.add_option("--config", config_path, "key = value config file")->expected(1);
    app.add_option("--seed", cfg.seed, "64-bit run seed (env OPFLAB_SEED as fallback)");
    app.add_option("--trials", cfg.trials, "random trials per check");
    app.add_option("--out", cfg.out_path, "write the JSON report to this path");
    app.add_flag("--table", want_table, "print an aligned table instead of JSON");
    app.add_flag("--json", want_json, "print JSON (the default)");

    auto* dims = app.add_subcommand("dims", "dimension formulas and the matching identity");
    dims->add_option("--d-min", cfg.d_min, "smallest dimension");
    dims->add_option("--d-max", cfg.d_max, "largest dimension");
    dims->add_option("--n-min", cfg.n_min, "smallest degree");
    dims->add_option("--n-max", cfg.n_range_max, "largest degree");

    auto* verify = app.add_subcommand("verify", "star-product axioms and associativity");
    verify->add_option("star", cfg.star, "quantum or toy")->required();
    verify->add_option("--a", cfg.a, "first factor dimension");
    verify->add_option("--b", cfg.b, "second factor dimension");
    verify->add_option("--c", cfg.c, "third factor dimension");
    verify->add_option("--assoc-trials", cfg.assoc_trials, "associativity search trials");
    verify->add_option("--replay", cfg.replay_path, "recompute a stored certificate");

    auto* probe = app.add_subcommand("probe", "irrep-content probes of the composition proof");
    probe->add_option("kind", cfg.kind, "licit or tripartite")->required();

    auto* estimate = app.add_subcommand("estimate", "finite state estimation per theory");
    estimate->add_option("theory", cfg.theory, "quantum, toy, or contextual")->required();
    estimate->add_option("--d", cfg.d, "system dimension");
    estimate->add_option("--nmax", cfg.n_max, "largest degree for the contextual witness");

    auto* dynamics = app.add_subcommand("dynamics", "state-update calculus checks");

    auto* distinguish = app.add_subcommand("distinguish", "moment-state distinguishability");
    distinguish->add_option("--d", cfg.d, "system dimension");

    for (auto* sub : {dims, verify, probe, estimate, dynamics, distinguish}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    if (want_json) want_table = false;

    try {
        const auto t0 = std::chrono::steady_clock::now();
        Report rep;
        if (dims->parsed()) rep = run_dims(cfg);
        else if (verify->parsed()) rep = run_verify(cfg);
        else if (probe->parsed()) rep = run_probe(cfg);
        else if (estimate->parsed()) rep = run_estimate(cfg);
        else if (dynamics->parsed()) rep = run_dynamics(cfg);
        else rep = run_distinguish(cfg);
        const auto t1 = std::chrono::steady_clock::now();
        rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

        const std::string json_text = report_to_json(rep).dump(2) + "\n";
        if (!cfg.out_path.empty()) {
            std::ofstream out(cfg.out_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
            out << json_text;
        }
        if (want_table) std::cout << render_table(rep);
        else std::cout << json_text;
        return rep.all_pass() ? 0 : 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
