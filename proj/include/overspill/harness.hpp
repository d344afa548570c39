//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/harness.hpp
//! Experiment orchestration, verdicts and report emission.
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <openssl/evp.h>

#include "overspill.hpp"
#include "model_io.hpp"

namespace overspill
{
//---------------------------------------------------------------------------//
// Content identifiers
//---------------------------------------------------------------------------//

namespace detail
{
inline std::string digest_hex(EVP_MD const* md, std::string const& bytes)
{
    unsigned char out[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, md, nullptr) != 1
        || EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1
        || EVP_DigestFinal_ex(ctx, out, &len) != 1)
    {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("digest computation failed");
    }
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
    {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(out[i]);
    }
    return os.str();
}
}  // namespace detail

inline std::string sha256_hex(std::string const& bytes)
{
    return detail::digest_hex(EVP_sha256(), bytes);
}

//! Identifier git assigns to a file with these contents.
inline std::string git_blob_id(std::string const& bytes)
{
    std::string header = "blob " + std::to_string(bytes.size());
    header.push_back('\0');
    return detail::digest_hex(EVP_sha1(), header + bytes);
}

//! SHA-256 of the canonical JSON form of the model.
inline std::string model_hash(ModelSpec const& spec)
{
    return sha256_hex(model_to_json(spec).dump());
}

//---------------------------------------------------------------------------//
// Serialization helpers
//---------------------------------------------------------------------------//

inline json to_json(EstimateCI const& e)
{
    return json{{"mean", e.mean},
                {"se", e.std_error},
                {"n_paths", e.n_paths},
                {"ci95", {e.ci_lo, e.ci_hi}}};
}

inline json to_json(ComparisonVerdict const& v)
{
    return json{{"lhs", to_json(v.lhs)},
                {"rhs", to_json(v.rhs)},
                {"diff", v.diff},
                {"z", v.z_score},
                {"threshold", v.threshold},
                {"mode", v.mode == VerdictMode::Sigma ? "sigma" : "absolute"},
                {"pass", v.pass}};
}

inline json set_to_json(DebtorSet s)
{
    return json(s.members());
}

//! Ladder nodes, edges and per-grid values along one path.
inline json ladder_to_json(Ladder const& ladder, LadderValues const* values = nullptr)
{
    json nodes = json::array();
    for (std::size_t i = 0; i < ladder.size(); ++i)
    {
        auto const& node = ladder[i];
        json edges = json::array();
        for (auto const& e : node.edges)
        {
            edges.push_back({{"j", e.j},
                             {"sub", e.sub},
                             {"up", e.up == kNoNode ? json(nullptr) : json(e.up)}});
        }
        json item{{"index", i},
                  {"S", node.S.mask()},
                  {"D", node.D.mask()},
                  {"edges", edges}};
        if (values)
        {
            json vs = json::array();
            for (std::size_t g = 0; g < values->grid.size(); ++g)
            {
                vs.push_back(values->at(i, g));
            }
            item["values"] = vs;
        }
        nodes.push_back(item);
    }
    json out{{"target", ladder.target().mask()},
             {"S_star", ladder.S_star().mask()},
             {"nodes", nodes}};
    if (values)
    {
        out["grid"] = values->grid;
    }
    return out;
}

//---------------------------------------------------------------------------//
// Experiment configuration
//---------------------------------------------------------------------------//

struct ExperimentConfig
{
    std::string kind;
    std::uint64_t seed = 20261019;
    std::size_t paths = 100000;
    std::vector<double> times{1.0};
    std::vector<DebtorSet> targets;
    std::vector<std::size_t> target_sizes;
    std::vector<std::pair<DebtorSet, DebtorSet>> pairs;
    std::size_t events = 10;
    double threshold = 3.0;
    double abs_tol = 1e-6;
    double tol = 1e-8;
    DriftForm form = DriftForm::Canonical;
};

struct RunOptions
{
    std::size_t threads = default_threads();
};

//! Fully resolved experiment: model plus settings plus identifiers.
struct Experiment
{
    ModelSpec spec;
    ExperimentConfig config;
    std::string config_id;
};

inline DriftForm parse_drift_form(std::string const& s)
{
    if (s == "canonical")
        return DriftForm::Canonical;
    if (s == "unweighted-subset")
        return DriftForm::UnweightedSubset;
    if (s == "verbatim")
        return DriftForm::Verbatim43;
    throw std::invalid_argument("unknown drift form '" + s + "'");
}

/*!
 * Parse a configuration file body. The model is given inline under "model"
 * or by path under "model_file" (relative to \c base_dir).
 */
inline Experiment parse_experiment(std::string const& text,
                                   std::string const& source = {},
                                   std::filesystem::path const& base_dir = {},
                                   std::string const& kind_override = {})
{
    json root = parse_json_text(text, source);
    detail::JsonReader r{source};
    Experiment ex;
    ex.config_id = git_blob_id(text);
    if (root.contains("model"))
    {
        ex.spec = model_from_json(root["model"], source);
    }
    else if (root.contains("model_file"))
    {
        if (!root["model_file"].is_string())
        {
            r.fail("/model_file", "expected a path string");
        }
        ex.spec = load_model((base_dir / root["model_file"].get<std::string>()).string());
    }
    else
    {
        r.fail("/model", "missing required key (or /model_file)");
    }

    static json const no_settings = json::object();
    json const& e = root.contains("experiment") ? root["experiment"] : no_settings;
    if (!e.is_object())
    {
        r.fail("/experiment", "expected an object");
    }
    auto& c = ex.config;
    if (!kind_override.empty())
    {
        c.kind = kind_override;
    }
    else
    {
        json const& kind = r.at(e, "kind", "/experiment");
        if (!kind.is_string())
        {
            r.fail("/experiment/kind", "expected a string");
        }
        c.kind = kind.get<std::string>();
    }
    static const std::vector<std::string> kinds{
        "survival", "joint_b", "validate_suite", "oracle_compare", "girsanov", "identity42"};
    if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end())
    {
        r.fail("/experiment/kind", "unknown experiment kind '" + c.kind + "'");
    }
    auto get_uint = [&](char const* key, auto& out) {
        if (e.contains(key))
        {
            if (!e[key].is_number_unsigned())
            {
                r.fail(std::string("/experiment/") + key, "expected a nonnegative integer");
            }
            out = e[key].template get<std::decay_t<decltype(out)>>();
        }
    };
    auto get_num = [&](char const* key, double& out) {
        if (e.contains(key))
        {
            out = r.number(e[key], std::string("/experiment/") + key);
        }
    };
    auto get_set = [&](json const& j, std::string const& ptr) {
        DebtorSet s;
        if (!j.is_array())
        {
            r.fail(ptr, "expected an array of debtor indices");
        }
        for (std::size_t i = 0; i < j.size(); ++i)
        {
            if (!j[i].is_number_unsigned() || j[i].get<std::size_t>() >= ex.spec.n)
            {
                r.fail(ptr + "/" + std::to_string(i), "expected a debtor index below n");
            }
            s = s.with(j[i].get<std::size_t>());
        }
        return s;
    };
    get_uint("seed", c.seed);
    get_uint("paths", c.paths);
    get_uint("events", c.events);
    get_num("threshold", c.threshold);
    get_num("abs_tol", c.abs_tol);
    get_num("tol", c.tol);
    if (e.contains("times"))
    {
        c.times = r.numbers(e["times"], "/experiment/times");
        std::sort(c.times.begin(), c.times.end());
    }
    if (e.contains("form"))
    {
        if (!e["form"].is_string())
        {
            r.fail("/experiment/form", "expected a string");
        }
        try
        {
            c.form = parse_drift_form(e["form"].get<std::string>());
        }
        catch (std::invalid_argument const& err)
        {
            r.fail("/experiment/form", err.what());
        }
    }
    if (e.contains("targets"))
    {
        if (!e["targets"].is_array())
        {
            r.fail("/experiment/targets", "expected an array of debtor sets");
        }
        for (std::size_t i = 0; i < e["targets"].size(); ++i)
        {
            c.targets.push_back(
                get_set(e["targets"][i], "/experiment/targets/" + std::to_string(i)));
        }
    }
    if (e.contains("target_sizes"))
    {
        for (double s : r.numbers(e["target_sizes"], "/experiment/target_sizes"))
        {
            c.target_sizes.push_back(static_cast<std::size_t>(s));
        }
    }
    if (e.contains("pairs"))
    {
        if (!e["pairs"].is_array())
        {
            r.fail("/experiment/pairs", "expected an array of {C, D} objects");
        }
        for (std::size_t i = 0; i < e["pairs"].size(); ++i)
        {
            std::string ptr = "/experiment/pairs/" + std::to_string(i);
            auto const& pj = e["pairs"][i];
            c.pairs.emplace_back(get_set(r.at(pj, "C", ptr), ptr + "/C"),
                                 get_set(r.at(pj, "D", ptr), ptr + "/D"));
        }
    }
    if (c.paths < 100 && c.kind != "oracle_compare" && c.kind != "validate_suite")
    {
        r.fail("/experiment/paths", "need at least 100 paths");
    }
    for (double t : c.times)
    {
        if (!(t >= 0 && t <= ex.spec.horizon))
        {
            r.fail("/experiment/times", "times must lie in [0, horizon]");
        }
    }
    return ex;
}

inline Experiment load_experiment(std::string const& path, std::string const& kind_override = {})
{
    auto text = read_text_file(path);
    return parse_experiment(
        text, path, std::filesystem::path(path).parent_path(), kind_override);
}

//! Model from a configuration file, or from a bare model file.
inline ModelSpec load_model_config(std::string const& path)
{
    auto text = read_text_file(path);
    json root = parse_json_text(text, path);
    if (root.is_object() && (root.contains("model") || root.contains("model_file")))
    {
        return parse_experiment(text, path, std::filesystem::path(path).parent_path(), "survival")
            .spec;
    }
    return model_from_json(root, path);
}

//---------------------------------------------------------------------------//
// Experiment execution
//---------------------------------------------------------------------------//

struct Report
{
    json body;
    bool all_pass = true;
    double seconds = 0;  //!< wall clock; kept out of the report bytes

    std::string json_text() const { return body.dump(2) + "\n"; }
    std::string csv_text() const;
};

namespace detail
{
//! Independent stream families derived from the master seed.
inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t purpose)
{
    return splitmix64(seed ^ splitmix64(purpose));
}

enum SeedPurpose : std::uint64_t
{
    kTheoremSeed = 1,
    kDirectSeed = 2,
    kReferenceSeed = 3,
    kEventSeed = 4,
};

inline std::vector<DebtorSet> resolve_targets(ExperimentConfig const& c, std::size_t n)
{
    if (!c.targets.empty())
    {
        return c.targets;
    }
    std::vector<DebtorSet> out;
    DebtorSet::all(n).for_each_subset([&](DebtorSet s) {
        bool size_ok = c.target_sizes.empty()
                           ? !s.empty()
                           : std::find(c.target_sizes.begin(), c.target_sizes.end(), s.size())
                                 != c.target_sizes.end();
        if (size_ok)
        {
            out.push_back(s);
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

class ReportBuilder
{
  public:
    ReportBuilder(Experiment const& ex) : ex_(ex)
    {
        body_["kind"] = ex.config.kind;
        body_["config_id"] = ex.config_id;
        body_["model_hash"] = model_hash(ex.spec);
        body_["seed"] = ex.config.seed;
        body_["paths"] = ex.config.paths;
        body_["times"] = ex.config.times;
        body_["rows"] = json::array();
        body_["equation_counts"] = json::array();
    }

    void add(std::string const& comparison,
             DebtorSet target,
             DebtorSet D,
             double t,
             ComparisonVerdict const& v,
             json extra = json::object())
    {
        json row{{"comparison", comparison},
                 {"target", set_to_json(target)},
                 {"D", set_to_json(D)},
                 {"t", t},
                 {"verdict", to_json(v)}};
        if (!extra.empty())
        {
            row["extra"] = std::move(extra);
        }
        body_["rows"].push_back(std::move(row));
        all_pass_ = all_pass_ && v.pass;
    }

    void count_ladder(Ladder const& ladder, std::size_t systemic)
    {
        body_["equation_counts"].push_back({{"target", set_to_json(ladder.target())},
                                            {"s", ladder.S_star().size()},
                                            {"b", systemic},
                                            {"count", ladder.size()}});
    }

    json& body() { return body_; }

    Report finish()
    {
        body_["all_pass"] = all_pass_;
        return Report{std::move(body_), all_pass_};
    }

  private:
    Experiment const& ex_;
    json body_;
    bool all_pass_ = true;
};

inline LadderOptions ladder_options(ExperimentConfig const& c)
{
    LadderOptions o;
    o.tol = c.tol;
    o.tol_neg = 10 * c.tol;
    o.form = c.form;
    return o;
}

inline void record_ladder(ReportBuilder& rb, ValidatedModel const& model, DebtorSet target)
{
    auto ladder = build_ladder(model, target);
    rb.count_ladder(ladder, (ladder.S_star() & model.systemic_set()).size());
}

inline ComparisonVerdict compare_auto(EstimateCI const& a, EstimateCI const& b, ExperimentConfig const& c)
{
    if (a.std_error == 0 && b.std_error == 0)
    {
        return compare_exact(a.mean, b.mean, c.abs_tol);
    }
    return compare_estimates(a, b, c.threshold);
}

inline void run_survival(ValidatedModel const& model, ExperimentConfig const& c, ReportBuilder& rb, RunOptions const& o)
{
    auto targets = resolve_targets(c, model.n());
    auto opt = ladder_options(c);
    std::vector<PathEvent> events;
    for (auto C : targets)
    {
        for (double t : c.times)
        {
            events.push_back(survival_event(C, t));
        }
    }
    auto direct = estimate_probabilities(
        model, Law::pc(model.all()), events, c.paths, derived_seed(c.seed, kDirectSeed), o.threads);
    bool const markovian = model.systemic_set().empty() && model.n() <= 12;
    std::size_t row = 0;
    for (auto C : targets)
    {
        record_ladder(rb, model, C);
        auto theorem = survival_via_theorem(
            model, C, c.times, c.paths, derived_seed(c.seed, kTheoremSeed), opt, o.threads);
        for (std::size_t g = 0; g < c.times.size(); ++g, ++row)
        {
            double t = c.times[g];
            rb.add("theorem_vs_direct", C, {}, t, compare_auto(theorem[g], direct[row], c));
            std::optional<double> oracle;
            if (model.n() == 1)
            {
                oracle = single_name_survival_oracle(model.alpha(0), model.gamma(0), model.p0(0), t);
            }
            else if (markovian)
            {
                oracle = markov_joint_survival(model, C, t);
            }
            if (oracle)
            {
                auto exact = EstimateCI::exact(*oracle);
                rb.add("theorem_vs_oracle", C, {}, t, compare_auto(theorem[g], exact, c));
                rb.add("direct_vs_oracle", C, {}, t, compare_estimates(direct[row], exact, c.threshold));
            }
        }
    }
}

inline void run_joint_b(ValidatedModel const& model, ExperimentConfig const& c, ReportBuilder& rb, RunOptions const& o)
{
    auto pairs = c.pairs;
    if (pairs.empty())
    {
        // every C of size 1-2 paired with each single systemic D outside it
        ExperimentConfig small;
        small.target_sizes = {1, 2};
        for (auto C : resolve_targets(small, model.n()))
        {
            (model.systemic_set() - C).for_each([&](std::size_t j) {
                pairs.emplace_back(C, DebtorSet::single(j));
            });
        }
    }
    auto opt = ladder_options(c);
    std::vector<PathEvent> events;
    for (auto const& [C, D] : pairs)
    {
        for (double t : c.times)
        {
            events.push_back(joint_b_event(C, D, t));
        }
    }
    auto direct = estimate_probabilities(
        model, Law::pc(model.all()), events, c.paths, derived_seed(c.seed, kDirectSeed), o.threads);
    std::size_t row = 0;
    for (auto const& [C, D] : pairs)
    {
        record_ladder(rb, model, C);
        for (double t : c.times)
        {
            auto th = joint_b_default_via_theorem(
                model, C, D, t, c.paths, derived_seed(c.seed, kTheoremSeed), opt, o.threads);
            json extra = json::object();
            if (th.invalid_D)
            {
                extra["note"] = th.note;
            }
            rb.add("theorem_vs_direct", C, D, t, compare_auto(th.estimate, direct[row++], c), extra);
        }
    }
}

inline void run_oracle_compare(ValidatedModel const& model, ExperimentConfig const& c, ReportBuilder& rb)
{
    if (!model.systemic_set().empty())
    {
        throw ConfigError("", "/model", "oracle_compare requires p0 = 0 for every debtor");
    }
    auto opt = ladder_options(c);
    double max_diff = 0;
    FPath quiet{std::vector<double>(model.n(), kInfinity)};
    for (auto C : resolve_targets(c, model.n()))
    {
        auto ladder = build_ladder(model, C);
        rb.count_ladder(ladder, 0);
        auto values = integrate_ladder(model, ladder, quiet, c.times, opt);
        auto ode = case2_ode_survival(model, C, c.times);
        for (std::size_t g = 0; g < c.times.size(); ++g)
        {
            double t = c.times[g];
            double markov = markov_joint_survival(model, C, t);
            double l = values.at(ladder.top(), g);
            max_diff = std::max({max_diff, std::abs(l - markov), std::abs(ode[g] - markov)});
            rb.add("ladder_vs_markov", C, {}, t, compare_exact(l, markov, c.abs_tol));
            rb.add("case2_vs_markov", C, {}, t, compare_exact(ode[g], markov, c.abs_tol));
        }
    }
    rb.body()["max_abs_diff"] = max_diff;
    rb.body()["form"] = to_cstring(c.form);
}

/*!
 * Random events for the measure-change audit: survival of a random set, or
 * survival of a set together with a B-type default of a systemic debtor.
 */
inline std::vector<PathEvent>
random_events(ValidatedModel const& model, std::size_t count, std::uint64_t seed)
{
    RngStream rng(RngStreamKey{seed, 0, 0, StreamPurpose::Threshold});
    std::vector<PathEvent> out;
    std::size_t const n = model.n();
    auto pick_set = [&](DebtorSet pool) {
        DebtorSet s;
        while (s.empty())
        {
            pool.for_each([&](std::size_t k) {
                if (rng.uniform() < 0.5)
                {
                    s = s.with(k);
                }
            });
        }
        return s;
    };
    for (std::size_t e = 0; e < count; ++e)
    {
        double t = model.horizon() * (0.25 + 0.75 * rng.uniform());
        DebtorSet sys = model.systemic_set();
        if (e % 2 == 1 && !sys.empty())
        {
            auto members = sys.members();
            std::size_t j = members[static_cast<std::size_t>(rng.uniform() * members.size())];
            DebtorSet rest = model.all().without(j);
            DebtorSet C = rest.empty() ? DebtorSet{} : pick_set(rest);
            out.push_back(joint_b_event(C, DebtorSet::single(j), t));
        }
        else
        {
            out.push_back(survival_event(pick_set(DebtorSet::all(n)), t));
        }
        out.back().label += "@" + json(t).dump();
    }
    return out;
}

inline void run_girsanov(ValidatedModel const& model, ExperimentConfig const& c, ReportBuilder& rb, RunOptions const& o)
{
    double const t = c.times.back();
    auto N = model.all();
    auto one = EstimateCI::exact(1.0);
    auto density = estimate_path_mean(model, Law::p0(), c.paths, derived_seed(c.seed, kReferenceSeed), o.threads,
                                      [&](SystemPath const& p) { return girsanov_weight(model, N, p, t); });
    rb.add("contagion_density_mean", N, {}, t, compare_estimates(density, one, c.threshold));
    auto pbar = estimate_fbar_mean(model, DebtorSet{}, c.paths, derived_seed(c.seed, kReferenceSeed), o.threads,
                                   [&](FPath const& f) { return pbar_weight(model, N, f, t); });
    rb.add("adjusted_density_mean", N, {}, t, compare_estimates(pbar, one, c.threshold));

    auto events = random_events(model, c.events, derived_seed(c.seed, kEventSeed));
    auto weighted = estimate_probabilities(
        model, Law::weighted_p0(N), events, c.paths, derived_seed(c.seed, kReferenceSeed), o.threads);
    auto direct = estimate_probabilities(
        model, Law::pc(N), events, c.paths, derived_seed(c.seed, kDirectSeed), o.threads);
    for (std::size_t e = 0; e < events.size(); ++e)
    {
        rb.add("weighted_vs_direct", N, {}, events[e].t,
               compare_estimates(weighted[e], direct[e], c.threshold),
               json{{"event", events[e].label}});
    }
}

inline void run_identity42(ValidatedModel const& model, ExperimentConfig const& c, ReportBuilder& rb, RunOptions const& o)
{
    auto cfg = c;
    if (cfg.targets.empty() && cfg.target_sizes.empty())
    {
        cfg.target_sizes = {1, 2, 3};
    }
    auto targets = resolve_targets(cfg, model.n());
    std::vector<PathEvent> events;
    for (auto C : targets)
    {
        for (double t : c.times)
        {
            events.push_back(survival_event(C, t));
        }
    }
    auto full = estimate_probabilities(
        model, Law::pc(model.all()), events, c.paths, derived_seed(c.seed, kDirectSeed), o.threads);
    std::size_t row = 0;
    for (auto C : targets)
    {
        std::vector<PathEvent> mine(events.begin() + row, events.begin() + row + c.times.size());
        auto reduced = estimate_probabilities(model, Law::pc(model.all() - C), mine, c.paths,
                                              derived_seed(c.seed, kReferenceSeed + C.mask() * 16),
                                              o.threads);
        for (std::size_t g = 0; g < c.times.size(); ++g, ++row)
        {
            rb.add("full_vs_complement", C, {}, c.times[g],
                   compare_estimates(full[row], reduced[g], c.threshold));
        }
    }
}

inline void run_validate_suite(ModelSpec const& spec, ExperimentConfig const& c, ReportBuilder& rb, RunOptions const& o)
{
    auto result = validate_spec(spec);
    json violations = json::array();
    for (auto const& v : result.violations)
    {
        violations.push_back({{"kind", to_cstring(v.kind)},
                              {"field", v.field},
                              {"debtor", v.debtor},
                              {"segment", v.segment},
                              {"message", v.message}});
    }
    rb.body()["violations"] = violations;
    rb.add("model_valid", {}, {}, 0.0, compare_exact(result.ok() ? 0.0 : 1.0, 0.0, 0.0));
    if (!result.ok() || c.paths < 100)
    {
        return;
    }
    auto const& model = *result.model;
    double const t = c.times.back();
    auto zero = EstimateCI::exact(0.0);
    auto seed = derived_seed(c.seed, kReferenceSeed);
    for (std::size_t k = 0; k < model.n(); ++k)
    {
        auto K = DebtorSet::single(k);
        auto m = estimate_path_mean(model, Law::p0(), c.paths, seed, o.threads,
                                    [&](SystemPath const& p) { return m_martingale(model, p, k, t); });
        rb.add("m_martingale_mean", K, {}, t, compare_estimates(m, zero, c.threshold));
        auto nn = estimate_fbar_mean(model, DebtorSet{}, c.paths, seed, o.threads,
                                     [&](FPath const& f) { return n_martingale(model, f, k, t); });
        rb.add("n_martingale_mean", K, {}, t, compare_estimates(nn, zero, c.threshold));
    }
    // Mark frequency at environment events of alive debtors minus g.
    auto mark_excess = [&](SystemPath const& p) {
        double total = 0;
        for (auto const& e : p.events())
        {
            if (e.kind == EventKind::TEvent && e.time <= t && p.tau(e.debtor) >= e.time)
            {
                total += (e.defaulted ? 1.0 : 0.0) - model.hazard(e.debtor).g(e.time);
            }
        }
        return total;
    };
    for (auto law : {Law::p0(), Law::pc(model.all())})
    {
        auto x = estimate_path_mean(model, law, c.paths, seed, o.threads, mark_excess);
        rb.add(law.kind == LawKind::P0 ? "mark_law_baseline" : "mark_law_contagion",
               model.all(), {}, t, compare_estimates(x, zero, c.threshold));
    }
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Run one experiment and build its report. The report bytes depend only on
 * the configuration; timings are returned separately.
 */
inline Report run_experiment(Experiment const& ex, RunOptions const& options = {})
{
    auto start = std::chrono::steady_clock::now();
    detail::ReportBuilder rb(ex);
    auto const& c = ex.config;
    rb.body()["ladder"] = {{"form", to_cstring(c.form)}, {"tol", c.tol}};
    if (c.kind == "validate_suite")
    {
        detail::run_validate_suite(ex.spec, c, rb, options);
    }
    else
    {
        auto model = validated(ex.spec);
        if (c.kind == "survival")
            detail::run_survival(model, c, rb, options);
        else if (c.kind == "joint_b")
            detail::run_joint_b(model, c, rb, options);
        else if (c.kind == "oracle_compare")
            detail::run_oracle_compare(model, c, rb);
        else if (c.kind == "girsanov")
            detail::run_girsanov(model, c, rb, options);
        else if (c.kind == "identity42")
            detail::run_identity42(model, c, rb, options);
    }
    auto report = rb.finish();
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

//---------------------------------------------------------------------------//
inline std::string Report::csv_text() const
{
    std::ostringstream os;
    os << "comparison,target,D,t,lhs,lhs_se,rhs,rhs_se,diff,z,threshold,mode,pass\n";
    auto set_str = [](json const& s) {
        std::string out;
        for (auto const& k : s)
        {
            out += (out.empty() ? "" : " ") + k.dump();
        }
        return out;
    };
    for (auto const& row : body.at("rows"))
    {
        auto const& v = row.at("verdict");
        os << row.at("comparison").get<std::string>() << ',' << set_str(row.at("target")) << ','
           << set_str(row.at("D")) << ',' << row.at("t").dump() << ','
           << v.at("lhs").at("mean").dump() << ',' << v.at("lhs").at("se").dump() << ','
           << v.at("rhs").at("mean").dump() << ',' << v.at("rhs").at("se").dump() << ','
           << v.at("diff").dump() << ',' << v.at("z").dump() << ',' << v.at("threshold").dump()
           << ',' << v.at("mode").get<std::string>() << ',' << (v.at("pass").get<bool>() ? 1 : 0)
           << '\n';
    }
    return os.str();
}

//---------------------------------------------------------------------------//
}  // namespace overspill
