#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "scenario.hpp"

using privleak::tools::ScenarioConfig;

int main(int argc, char** argv) {
    CLI::App app{"privleak: reconstruction attacks on query-set-size-controlled interfaces"};

    std::string config_path, mode, input, output, knowledge, method;
    std::uint64_t seed = 0;
    int k = 0, nh_size = 0, n = 0, dim = 0, batch = 0;
    std::int64_t target_x = 0, timestamp = 0;

    app.add_option("--config", config_path, "JSON config file; explicit flags override it");
    app.add_option("--mode", mode,
                   "gen | attack-avg-1d | attack-avg-2d | attack-avg-3d | attack-order | "
                   "lemma1 | lemma2 | table1 | nends | nends-attack | nends-bench");
    app.add_option("--input", input, "input CSV (dataset or column, mode-dependent)");
    app.add_option("--output", output, "artifact CSV path (mode-dependent)");
    app.add_option("--knowledge", knowledge, "knowledge CSV for nends-attack");
    app.add_option("--method", method, "nends cycle search: tree | zigzag");
    app.add_option("--k", k, "query-set-size threshold");
    app.add_option("--nh-size", nh_size, "neighborhood size for nends modes");
    app.add_option("--seed", seed, "RNG seed; falls back to PRIVLEAK_SEED, then 0");
    app.add_option("--n", n, "record / value count for generating modes");
    app.add_option("--dim", dim, "dataset dimension for gen (1-3)");
    app.add_option("--target-x", target_x, "target coordinate for attack-avg-1d");
    app.add_option("--timestamp", timestamp, "timestamp under attack");
    app.add_option("--batch", batch, "run this many seeds concurrently; emits a JSON array");

    CLI11_PARSE(app, argc, argv);

    try {
        ScenarioConfig cfg;
        bool config_has_seed = false;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open " + config_path);
            nlohmann::json j = nlohmann::json::parse(in);
            cfg = privleak::tools::config_from_json(j);
            config_has_seed = j.contains("seed");
        }
        if (app.count("--mode")) cfg.mode = mode;
        if (app.count("--input")) cfg.input = input;
        if (app.count("--output")) cfg.output = output;
        if (app.count("--knowledge")) cfg.knowledge = knowledge;
        if (app.count("--method")) cfg.method = method;
        if (app.count("--k")) cfg.k = k;
        if (app.count("--nh-size")) cfg.nh_size = nh_size;
        if (app.count("--n")) cfg.n = n;
        if (app.count("--dim")) cfg.dim = dim;
        if (app.count("--target-x")) cfg.target_x = target_x;
        if (app.count("--timestamp")) cfg.t = timestamp;
        if (app.count("--batch")) cfg.batch = batch;
        if (app.count("--seed")) {
            cfg.seed = seed;
        } else if (!config_has_seed) {
            if (const char* env = std::getenv("PRIVLEAK_SEED")) {
                cfg.seed = std::stoull(env);
            }
        }
        if (cfg.mode.empty()) {
            throw std::runtime_error("--mode is required (or provide it via --config)");
        }

        nlohmann::json report = privleak::tools::run_batch(cfg);
        std::cout << report.dump(2) << "\n";
        std::string failed = privleak::tools::failure_reason(report);
        if (!failed.empty()) {
            std::cerr << "error: " << failed << "\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
