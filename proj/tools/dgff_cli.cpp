#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgff/error.hpp"
#include "dgff/harness.hpp"
#include "dgff/suite.hpp"

namespace {

constexpr int kValidationExit = 2;
constexpr int kAcceptanceExit = 3;

struct Param {
    const char* flag;
    const char* key;
    const char* help;
};

struct Command {
    const char* name;
    const char* help;
    std::vector<Param> params;
};

const std::vector<Command>& commands()
{
    static const std::vector<Command> list = {
        {"green", "Green function of a domain",
         {{"--domain", "domain", "box:N | cbox:K | disc:N | mask:path"}, {"--dump", "dump", "write G as CSV"}}},
        {"sample", "Exact DGFF samples",
         {{"--domain", "domain", "box:N | cbox:K | disc:N | mask:path"},
          {"--reps", "reps", "number of replicas"},
          {"--out", "out", "fields.bin or fields.csv"}}},
        {"levelset", "Intermediate level sets and their point measure",
         {{"--domain", "domain", "box:N | cbox:K | disc:N | mask:path"},
          {"--lambda", "lambda", "level as a fraction of the maximum scale"},
          {"--reps", "reps", "number of replicas"},
          {"--out", "out", "summary CSV"},
          {"--measure", "measure", "JSON-lines point measure"},
          {"--Ns", "Ns", "comma separated sizes for --exponent"}}},
        {"maxstat", "Maximum statistics and the structured extremal measure",
         {{"--domain", "domain", "box:N | cbox:K | disc:N | mask:path"},
          {"--reps", "reps", "number of replicas"},
          {"--radius", "radius", "local-maximum radius"},
          {"--window", "window", "cluster window half-width"},
          {"--depth", "depth", "extremal depth below m_N"},
          {"--out", "out", "per-replica CSV"},
          {"--measure", "measure", "JSON-lines point measure"}}},
        {"brw", "Branching random walk maxima",
         {{"--b", "b", "branching number"},
          {"--n", "n", "depth"},
          {"--reps", "reps", "number of replicas"},
          {"--out", "out", "stats CSV"}}},
        {"chaos", "Gaussian multiplicative chaos on the unit square",
         {{"--lambda", "lambda", "beta / alpha"},
          {"--levels", "levels", "number of levels"},
          {"--resolution-log2", "resolution-log2", "lattice resolution exponent"},
          {"--cells", "cells", "output grid exponent"},
          {"--mode", "mode", "martingale | seneta-heyde | hierarchical"},
          {"--out", "out", "CSV of cell centre x, y, mass"}}},
        {"resist", "Effective resistance of a network",
         {{"--net", "net", "network file with lines 'u v c'"},
          {"--src", "src", "source vertex list"},
          {"--dst", "dst", "sink vertex list"},
          {"--decompose", "decompose", "none | paths | cuts | both"},
          {"--decomposition-out", "decomposition-out", "decomposition JSON"}}},
        {"walk", "Random walk in the DGFF environment",
         {{"--beta", "beta", "inverse temperature"},
          {"--N", "N", "box half-width"},
          {"--reps", "reps", "number of walks"},
          {"--max-steps", "max-steps", "step cap per walk"},
          {"--out", "out", "per-walk CSV"}}},
    };
    return list;
}

int run_suite(std::uint64_t seed, int threads, const std::vector<int>& only, const std::string& out_dir,
              bool write_report)
{
    dgff::AcceptanceOptions opt;
    opt.seed = seed;
    opt.threads = threads;
    opt.only = only;
    auto results = dgff::run_acceptance(opt, [](const dgff::CriterionResult& r) {
        std::cout << dgff::format_result(r) << std::endl;
    });
    int failed = 0;
    nlohmann::json report = nlohmann::json::array();
    for (const auto& r : results) {
        failed += r.passed ? 0 : 1;
        report.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail},
                          {"seconds", r.seconds}});
    }
    std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed"
              << std::endl;
    if (write_report) {
        std::filesystem::create_directories(out_dir);
        std::ofstream(std::filesystem::path(out_dir) / "acceptance.json") << report.dump(2) << '\n';
    }
    return failed == 0 ? 0 : kAcceptanceExit;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete Gaussian free field toolkit"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = ".";
    std::string config_path;
    auto* seed_opt = app.add_option("--seed", seed, "master seed");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads, 0 for all cores");
    auto* out_opt = app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);

    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> options;
    std::map<std::string, CLI::App*> subs;
    bool exponent = false;
    for (const auto& c : commands()) {
        auto* sub = app.add_subcommand(c.name, c.help);
        subs[c.name] = sub;
        for (const auto& p : c.params)
            options[c.name].emplace_back(p.key, sub->add_option(p.flag, values[c.name][p.key], p.help));
        if (std::string(c.name) == "levelset")
            sub->add_flag("--exponent", exponent, "fit the level-set exponent over --Ns");
    }
    auto* suite = app.add_subcommand("suite", "Run the acceptance criteria");
    std::vector<int> only;
    bool report = false;
    suite->add_option("--only", only, "criterion ids to run")->delimiter(',')->check(CLI::Range(1, 16));
    suite->add_flag("--report", report, "write acceptance.json to --out-dir");
    suite->add_flag_callback("--list", [] {
        for (const auto& c : dgff::acceptance_criteria()) std::printf("%02d %s\n", c.id, c.name.c_str());
        std::exit(0);
    }, "list the criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kValidationExit;
    }

    try {
        dgff::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = dgff::load_config_file(config_path);
        if (seed_opt->count()) cfg.seed = seed;
        if (threads_opt->count()) cfg.threads = threads;
        if (out_opt->count()) cfg.out_dir = out_dir;

        if (suite->parsed()) return run_suite(cfg.seed, cfg.threads, only, cfg.out_dir, report);

        for (const auto& [name, sub] : subs) {
            if (!sub->parsed()) continue;
            cfg.experiment = name;
            for (const auto& [key, opt] : options[name])
                if (opt->count()) cfg.params[key] = values[name][key];
            if (name == "levelset" && exponent) cfg.experiment = "levelset-exponent";
        }
        dgff::ExperimentResult res = dgff::run_experiment(cfg);
        if (cfg.experiment == "resist") {
            auto j = nlohmann::json::parse(res.summary_json);
            std::printf("R_eff %.17g\nC_eff %.17g\n", j["R_eff"].get<double>(), j["C_eff"].get<double>());
        } else {
            std::cout << res.summary_json;
        }
        for (const auto& o : res.outputs) std::cerr << o.sha1 << "  " << o.path << '\n';
        std::cerr << "manifest " << res.manifest_path << '\n';
        return 0;
    } catch (const dgff::Error& e) {
        std::cerr << "dgff: " << dgff::to_string(e.kind()) << ": " << e.what() << '\n';
        return e.is_validation() ? kValidationExit : 1;
    } catch (const std::exception& e) {
        std::cerr << "dgff: " << e.what() << '\n';
        return 1;
    }
}
