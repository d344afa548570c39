//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tools/overspill_cli.cpp
//! Command-line front end: validation, simulation, solving, oracles and
//! comparison suites.
//---------------------------------------------------------------------------//
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "overspill/harness.hpp"

namespace fs = std::filesystem;
using namespace overspill;

namespace
{
//---------------------------------------------------------------------------//
struct Common
{
    std::size_t threads = 0;
    double tol = 1e-8;
    std::string output = "json";

    std::size_t thread_count() const { return threads ? threads : default_threads(); }
};

/*!
 * Debtor set from "0,2,3", "all", "none" or a hexadecimal mask "0x5".
 */
DebtorSet parse_set(std::string const& text, std::size_t n)
{
    if (text == "all")
    {
        return DebtorSet::all(n);
    }
    if (text == "none" || text.empty())
    {
        return {};
    }
    if (text.rfind("0x", 0) == 0)
    {
        auto mask = std::stoul(text.substr(2), nullptr, 16);
        if (mask >> n)
        {
            throw CLI::ValidationError("set", "mask has bits beyond n");
        }
        return DebtorSet(static_cast<DebtorSet::mask_type>(mask));
    }
    DebtorSet s;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        auto comma = text.find(',', pos);
        auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t k = std::stoul(item);
        if (k >= n)
        {
            throw CLI::ValidationError("set", "debtor index " + item + " out of range");
        }
        s = s.with(k);
        if (comma == std::string::npos)
        {
            break;
        }
        pos = comma + 1;
    }
    return s;
}

void emit(json const& body, std::string const& csv, Common const& common)
{
    if (common.output == "csv")
    {
        std::cout << csv;
    }
    else
    {
        std::cout << body.dump(2) << '\n';
    }
}

std::string estimates_csv(json const& rows)
{
    std::string out = "quantity,t,mean,se,n_paths\n";
    for (auto const& r : rows)
    {
        out += r.at("quantity").get<std::string>() + "," + r.at("t").dump() + ","
               + r.at("estimate").at("mean").dump() + "," + r.at("estimate").at("se").dump()
               + "," + r.at("estimate").at("n_paths").dump() + "\n";
    }
    return out;
}

//---------------------------------------------------------------------------//
int cmd_validate(std::string const& path, Common const& common)
{
    auto result = validate_spec(load_model_config(path));
    json body{{"valid", result.ok()}, {"violations", json::array()}};
    std::string csv = "kind,field,debtor,segment,message\n";
    for (auto const& v : result.violations)
    {
        body["violations"].push_back({{"kind", to_cstring(v.kind)},
                                      {"field", v.field},
                                      {"debtor", v.debtor},
                                      {"segment", v.segment},
                                      {"message", v.message}});
        csv += std::string(to_cstring(v.kind)) + "," + v.field + "," + std::to_string(v.debtor)
               + "," + std::to_string(v.segment) + ",\"" + v.message + "\"\n";
    }
    if (result.ok())
    {
        body["model_hash"] = model_hash(result.model->spec());
    }
    emit(body, csv, common);
    return result.ok() ? 0 : 1;
}

//---------------------------------------------------------------------------//
struct SimulateArgs
{
    std::string law = "pc";
    std::string contagious = "all";
    std::size_t paths = 100000;
    std::uint64_t seed = 20261019;
    double t = 1.0;
    std::string dump;
};

int cmd_simulate(std::string const& path, SimulateArgs const& a, Common const& common)
{
    auto model = validated(load_model_config(path));
    DebtorSet C = parse_set(a.contagious, model.n());
    std::size_t threads = common.thread_count();
    json rows = json::array();

    if (a.law == "pbar")
    {
        for (std::size_t k = 0; k < model.n(); ++k)
        {
            auto est = estimate_fbar_mean(model, C, a.paths, a.seed, threads,
                                          [&](FPath const& f) { return f.T(k) > a.t ? 1.0 : 0.0; });
            rows.push_back({{"quantity", "no_environment_event_" + std::to_string(k)},
                            {"t", a.t},
                            {"estimate", to_json(est)}});
        }
    }
    else
    {
        Law law = a.law == "p0" ? Law::p0() : Law::pc(C);
        std::vector<PathEvent> events;
        std::vector<std::string> names;
        for (std::size_t k = 0; k < model.n(); ++k)
        {
            events.push_back(survival_event(DebtorSet::single(k), a.t));
            names.push_back("survive_" + std::to_string(k));
        }
        events.push_back(survival_event(model.all(), a.t));
        names.push_back("survive_all");
        auto est = estimate_probabilities(model, law, events, a.paths, a.seed, threads);
        for (std::size_t e = 0; e < events.size(); ++e)
        {
            rows.push_back({{"quantity", names[e]}, {"t", a.t}, {"estimate", to_json(est[e])}});
        }
    }

    if (!a.dump.empty())
    {
        std::ofstream out(a.dump);
        if (!out)
        {
            throw std::runtime_error("cannot write " + a.dump);
        }
        std::vector<SystemPath> paths;
        for (std::size_t p = 0; p < a.paths; ++p)
        {
            PathKey key{a.seed, p};
            if (a.law == "pbar")
                paths.push_back(simulate_fbar_path_with_defaults(model, C, key));
            else if (a.law == "p0")
                paths.push_back(simulate_p0_path(model, key));
            else
                paths.push_back(simulate_contagion_path(model, C, key));
        }
        write_paths_csv(out, paths);
    }

    json body{{"law", a.law},
              {"contagious", set_to_json(C)},
              {"seed", a.seed},
              {"paths", a.paths},
              {"model_hash", model_hash(model.spec())},
              {"rows", rows}};
    emit(body, estimates_csv(rows), common);
    return 0;
}

//---------------------------------------------------------------------------//
struct SolveArgs
{
    std::string target = "0";
    std::vector<double> t{1.0};
    std::size_t paths = 100000;
    std::uint64_t seed = 20261019;
    std::string form = "canonical";
    std::string dump_ladder;
};

int cmd_solve(std::string const& path, SolveArgs const& a, Common const& common)
{
    auto model = validated(load_model_config(path));
    DebtorSet C = parse_set(a.target, model.n());
    auto grid = a.t;
    std::sort(grid.begin(), grid.end());
    LadderOptions opt;
    opt.tol = common.tol;
    opt.tol_neg = 10 * common.tol;
    opt.form = parse_drift_form(a.form);

    auto ladder = build_ladder(model, C);
    auto est = survival_via_theorem(model, C, grid, a.paths, a.seed, opt, common.thread_count());
    json rows = json::array();
    for (std::size_t g = 0; g < grid.size(); ++g)
    {
        rows.push_back({{"quantity", "survive_" + C.to_string()}, {"t", grid[g]}, {"estimate", to_json(est[g])}});
    }
    json body{{"target", set_to_json(C)},
              {"form", a.form},
              {"seed", a.seed},
              {"paths", a.paths},
              {"equation_count", ladder.size()},
              {"model_hash", model_hash(model.spec())},
              {"rows", rows}};
    if (!a.dump_ladder.empty())
    {
        // values along the path with no environment events
        FPath quiet{std::vector<double>(model.n(), kInfinity)};
        auto values = integrate_ladder(model, ladder, quiet, grid, opt);
        std::ofstream(a.dump_ladder) << ladder_to_json(ladder, &values).dump(2) << '\n';
    }
    emit(body, estimates_csv(rows), common);
    return 0;
}

//---------------------------------------------------------------------------//
struct OracleArgs
{
    std::string kind = "markov";
    std::string target = "0";
    std::vector<double> t{1.0};
};

int cmd_oracle(std::string const& path, OracleArgs const& a, Common const& common)
{
    auto model = validated(load_model_config(path));
    DebtorSet C = parse_set(a.target, model.n());
    auto grid = a.t;
    std::sort(grid.begin(), grid.end());
    std::vector<double> values;
    if (a.kind == "single")
    {
        if (model.n() != 1)
        {
            throw std::invalid_argument("single-name oracle needs n = 1");
        }
        for (double t : grid)
        {
            values.push_back(C.empty() ? 1.0
                                       : single_name_survival_oracle(
                                             model.alpha(0), model.gamma(0), model.p0(0), t));
        }
    }
    else if (a.kind == "markov")
    {
        for (double t : grid)
        {
            values.push_back(markov_joint_survival(model, C, t));
        }
    }
    else
    {
        values = case2_ode_survival(model, C, grid);
    }
    json rows = json::array();
    std::string csv = "kind,t,value\n";
    for (std::size_t g = 0; g < grid.size(); ++g)
    {
        rows.push_back({{"t", grid[g]}, {"value", values[g]}});
        csv += a.kind + "," + json(grid[g]).dump() + "," + json(values[g]).dump() + "\n";
    }
    emit({{"kind", a.kind}, {"target", set_to_json(C)}, {"rows", rows}}, csv, common);
    return 0;
}

//---------------------------------------------------------------------------//
struct CompareArgs
{
    std::string suite;
    std::vector<double> t;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string form;
    std::string out_dir;
};

int cmd_compare(std::string const& path, CompareArgs const& a, Common const& common, bool tol_set)
{
    auto ex = load_experiment(path, a.suite);
    if (!a.t.empty())
    {
        ex.config.times = a.t;
        std::sort(ex.config.times.begin(), ex.config.times.end());
    }
    if (a.paths)
    {
        ex.config.paths = a.paths;
    }
    if (a.seed_set)
    {
        ex.config.seed = a.seed;
    }
    if (tol_set)
    {
        ex.config.tol = common.tol;
    }
    if (!a.form.empty())
    {
        ex.config.form = parse_drift_form(a.form);
    }
    auto report = run_experiment(ex, RunOptions{common.thread_count()});
    std::cerr << "elapsed " << report.seconds << " s\n";
    if (!a.out_dir.empty())
    {
        fs::create_directories(a.out_dir);
        std::string stem = fs::path(path).stem().string() + "." + ex.config.kind;
        std::ofstream(fs::path(a.out_dir) / (stem + ".json"), std::ios::binary) << report.json_text();
        std::ofstream(fs::path(a.out_dir) / (stem + ".csv"), std::ios::binary) << report.csv_text();
    }
    if (common.output == "csv")
        std::cout << report.csv_text();
    else
        std::cout << report.json_text();
    return report.all_pass ? 0 : 1;
}

//---------------------------------------------------------------------------//
int cmd_report(std::string const& dir, Common const& common)
{
    std::vector<fs::path> files;
    for (auto const& entry : fs::directory_iterator(dir))
    {
        if (entry.path().extension() == ".json")
        {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    bool all_pass = true;
    json rows = json::array();
    std::string csv = "file,kind,rows,failures,all_pass\n";
    for (auto const& f : files)
    {
        json r = parse_json_text(read_text_file(f.string()), f.string());
        if (!r.is_object() || !r.contains("rows") || !r.contains("all_pass"))
        {
            continue;
        }
        std::size_t failures = 0;
        for (auto const& row : r["rows"])
        {
            failures += row.at("verdict").at("pass").get<bool>() ? 0 : 1;
        }
        bool pass = r["all_pass"].get<bool>();
        all_pass = all_pass && pass;
        rows.push_back({{"file", f.filename().string()},
                        {"kind", r.value("kind", "")},
                        {"rows", r["rows"].size()},
                        {"failures", failures},
                        {"all_pass", pass}});
        csv += f.filename().string() + "," + r.value("kind", "") + ","
               + std::to_string(r["rows"].size()) + "," + std::to_string(failures) + ","
               + (pass ? "1" : "0") + "\n";
    }
    emit({{"reports", rows}, {"all_pass", all_pass}}, csv, common);
    return all_pass ? 0 : 1;
}
}  // namespace

//---------------------------------------------------------------------------//
int main(int argc, char** argv)
{
    CLI::App app{"overspill: default contagion simulation and ladder solver"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--threads", common.threads, "worker threads (default: OVERSPILL_THREADS or all cores)");
    auto* tol_opt = app.add_option("--tol", common.tol, "integrator tolerance");
    app.add_option("--output", common.output, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    std::string config;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("config", config, "model or experiment config (JSON)")->required();
    };

    auto* validate = app.add_subcommand("validate", "check a model against its invariants");
    add_config(validate);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo under a chosen measure");
    add_config(simulate);
    simulate->add_option("--law", sim.law)->check(CLI::IsMember({"p0", "pc", "pbar"}));
    simulate->add_option("--contagious", sim.contagious, "contagious set: 0,1 | 0x3 | all | none");
    simulate->add_option("--paths", sim.paths);
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--t", sim.t);
    simulate->add_option("--dump-paths", sim.dump, "write the event log as CSV");

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "joint survival through the ladder");
    add_config(solve);
    solve->add_option("--target", solve_args.target, "target set C");
    solve->add_option("--t", solve_args.t)->expected(1, -1);
    solve->add_option("--paths", solve_args.paths);
    solve->add_option("--seed", solve_args.seed);
    solve->add_option("--form", solve_args.form)
        ->check(CLI::IsMember({"canonical", "unweighted-subset", "verbatim"}));
    solve->add_option("--dump-ladder", solve_args.dump_ladder, "write nodes and values as JSON");

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "independent reference values");
    add_config(oracle);
    oracle->add_option("--kind", oracle_args.kind)->check(CLI::IsMember({"single", "markov", "case2"}));
    oracle->add_option("--target", oracle_args.target);
    oracle->add_option("--t", oracle_args.t)->expected(1, -1);

    CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "run a comparison suite and emit a report");
    add_config(compare);
    compare->add_option("--suite", cmp.suite)
        ->check(CLI::IsMember({"survival", "joint_b", "girsanov", "identity42", "validate_suite",
                               "oracle_compare"}));
    compare->add_option("--t", cmp.t)->expected(1, -1);
    compare->add_option("--paths", cmp.paths);
    auto* seed_opt = compare->add_option("--seed", cmp.seed);
    compare->add_option("--form", cmp.form)
        ->check(CLI::IsMember({"canonical", "unweighted-subset", "verbatim"}));
    compare->add_option("--out", cmp.out_dir, "directory for the JSON and CSV report");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "summarize report files in a directory");
    report->add_option("dir", report_dir)->required()->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*validate)
            return cmd_validate(config, common);
        if (*simulate)
            return cmd_simulate(config, sim, common);
        if (*solve)
            return cmd_solve(config, solve_args, common);
        if (*oracle)
            return cmd_oracle(config, oracle_args, common);
        if (*compare)
        {
            cmp.seed_set = seed_opt->count() > 0;
            return cmd_compare(config, cmp, common, tol_opt->count() > 0);
        }
        if (*report)
            return cmd_report(report_dir, common);
    }
    catch (ModelError const& e)
    {
        std::cerr << "invalid model: " << e.what() << '\n';
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
