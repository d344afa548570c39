//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/ladder_solver.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "debtor_set.hpp"
#include "estimate.hpp"
#include "integrator.hpp"
#include "ladder.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "path.hpp"
#include "simulate.hpp"
#include "stats.hpp"

namespace overspill
{
//---------------------------------------------------------------------------//
struct LadderOptions
{
    double tol = 1e-8;
    double tol_neg = 1e-7;
    DriftForm form = DriftForm::Canonical;
};

//! A ladder value fell below the negativity tolerance.
class NegativeValue : public std::runtime_error
{
  public:
    NegativeValue(std::size_t node, double time, double value)
        : std::runtime_error("ladder node " + std::to_string(node) + " reached "
                             + std::to_string(value) + " at t = "
                             + std::to_string(time))
        , node_(node)
        , time_(time)
        , value_(value)
    {
    }
    std::size_t node() const { return node_; }
    double time() const { return time_; }
    double value() const { return value_; }

  private:
    std::size_t node_;
    double time_;
    double value_;
};

//! Ladder values on the output grid for one environment path.
struct LadderValues
{
    std::vector<double> grid;
    std::vector<std::vector<double>> values;  //!< [grid index][node]
    double min_value = 1;
    DopriStats stats;

    double at(std::size_t node, std::size_t grid_index) const
    {
        return values[grid_index][node];
    }
};

//---------------------------------------------------------------------------//
/*!
 * Integrate every ladder node along one environment path.
 *
 * Between consecutive stops (environment events, coefficient breakpoints,
 * grid points) the system is linear with fixed indicator flags and is
 * advanced by the adaptive integrator; at each event T(k) the jump is applied
 * from pre-jump values.
 */
inline LadderValues integrate_ladder(ValidatedModel const& model,
                                     Ladder const& ladder,
                                     FPath const& f,
                                     std::vector<double> const& t_grid,
                                     LadderOptions const& opt = {})
{
    std::size_t const n = model.n();
    if (f.size() != n)
    {
        throw std::invalid_argument("integrate_ladder: path has wrong debtor count");
    }
    if (t_grid.empty() || !std::is_sorted(t_grid.begin(), t_grid.end())
        || t_grid.front() < 0 || t_grid.back() > model.horizon())
    {
        throw std::invalid_argument(
            "integrate_ladder: grid must be sorted inside [0, horizon]");
    }
    double const t_end = t_grid.back();
    std::vector<double> stops(t_grid.begin(), t_grid.end());
    for (std::size_t k = 0; k < n; ++k)
    {
        if (f.T(k) <= t_end)
        {
            stops.push_back(f.T(k));
        }
    }
    for (double knot : model.knots())
    {
        if (knot < t_end)
        {
            stops.push_back(knot);
        }
    }
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    std::size_t const m = ladder.size();
    LadderValues out;
    out.grid = t_grid;
    std::vector<double> y(m, 1.0);
    std::size_t next_grid = 0;
    auto record = [&](double s) {
        while (next_grid < t_grid.size() && t_grid[next_grid] == s)
        {
            out.values.push_back(y);
            ++next_grid;
        }
    };
    auto check = [&](double t, std::vector<double> const& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            out.min_value = std::min(out.min_value, v[i]);
            if (v[i] < -opt.tol_neg)
            {
                throw NegativeValue(i, t, v[i]);
            }
        }
    };

    struct FlatTerm
    {
        std::uint32_t dst;
        std::uint32_t src;
        std::uint32_t slot;
        double coeff;
    };
    std::vector<TaggedTerm> tagged;
    std::vector<FlatTerm> terms;
    std::vector<double> slot_value(1 + 2 * n, 1.0);
    std::vector<std::size_t> g_debtors;
    std::vector<std::size_t> e_debtors;
    std::vector<double> increment(m);
    std::span<double const> T_times(f.T_times);

    DormandPrince stepper({opt.tol, opt.tol});
    auto rhs = [&](double t, std::vector<double> const& v, std::vector<double>& dv) {
        for (std::size_t i : g_debtors)
        {
            slot_value[1 + i] = model.hazard(i).g(t);
        }
        for (std::size_t i : e_debtors)
        {
            slot_value[1 + n + i] = std::exp(model.hazard(i).gamma_g_integral(t));
        }
        std::fill(dv.begin(), dv.end(), 0.0);
        for (auto const& term : terms)
        {
            dv[term.dst] += term.coeff * slot_value[term.slot] * v[term.src];
        }
    };

    double t = 0;
    record(0.0);
    for (double s : stops)
    {
        if (s > t)
        {
            DebtorSet past;
            for (std::size_t k = 0; k < n; ++k)
            {
                if (f.T(k) <= t)
                {
                    past = past.with(k);
                }
            }
            tagged.clear();
            for (std::size_t node = 0; node < m; ++node)
            {
                append_drift_terms(model, ladder, node, t, past, T_times, opt.form, tagged);
            }
            terms.clear();
            g_debtors.clear();
            e_debtors.clear();
            for (auto const& tt : tagged)
            {
                std::uint32_t slot = 0;
                if (tt.mult == Multiplier::G)
                {
                    slot = static_cast<std::uint32_t>(1 + tt.debtor);
                    g_debtors.push_back(tt.debtor);
                }
                else if (tt.mult == Multiplier::ExpG)
                {
                    slot = static_cast<std::uint32_t>(1 + n + tt.debtor);
                    e_debtors.push_back(tt.debtor);
                }
                terms.push_back({static_cast<std::uint32_t>(tt.dst),
                                 static_cast<std::uint32_t>(tt.src),
                                 slot,
                                 tt.coeff});
            }
            for (auto* list : {&g_debtors, &e_debtors})
            {
                std::sort(list->begin(), list->end());
                list->erase(std::unique(list->begin(), list->end()), list->end());
            }
            stepper.integrate(rhs, t, s, y, check);
            t = s;
        }
        for (std::size_t k = 0; k < n; ++k)
        {
            if (f.T(k) != s)
            {
                continue;
            }
            DebtorSet past;
            for (std::size_t j = 0; j < n; ++j)
            {
                if (f.T(j) < s)
                {
                    past = past.with(j);
                }
            }
            tagged.clear();
            for (std::size_t node = 0; node < m; ++node)
            {
                append_jump_terms(model, ladder, node, k, s, past, tagged);
            }
            std::fill(increment.begin(), increment.end(), 0.0);
            for (auto const& tt : tagged)
            {
                increment[tt.dst] += tt.coeff * y[tt.src];
            }
            for (std::size_t i = 0; i < m; ++i)
            {
                y[i] += increment[i];
            }
            check(s, y);
        }
        record(s);
    }
    out.stats = stepper.stats();
    return out;
}

//---------------------------------------------------------------------------//
/*!
 * Survival of every debtor in targetC on each grid time, as the mean of the
 * top ladder value over environment paths from the default-adjusted measure.
 */
inline std::vector<EstimateCI> survival_via_theorem(ValidatedModel const& model,
                                                    DebtorSet targetC,
                                                    std::vector<double> const& t_grid,
                                                    std::size_t n_paths,
                                                    std::uint64_t seed,
                                                    LadderOptions const& opt = {},
                                                    std::size_t threads = default_threads())
{
    std::size_t const g = t_grid.size();
    if (targetC.empty())
    {
        return std::vector<EstimateCI>(g, EstimateCI::from_moments(1.0, 0.0, n_paths));
    }
    auto ladder = build_ladder(model, targetC);
    std::size_t const top = ladder.top();
    if (model.systemic_set().empty())
    {
        FPath quiet{std::vector<double>(model.n(), kInfinity)};
        auto values = integrate_ladder(model, ladder, quiet, t_grid, opt);
        std::vector<EstimateCI> out;
        for (std::size_t i = 0; i < g; ++i)
        {
            out.push_back(EstimateCI::from_moments(values.at(top, i), 0.0, n_paths));
        }
        return out;
    }
    if (n_paths < 100)
    {
        throw std::invalid_argument("survival_via_theorem: need at least 100 paths");
    }
    auto rows = parallel_map(n_paths, threads, [&](std::size_t p) {
        auto f = simulate_fbar_path(model, targetC, PathKey{seed, p});
        auto values = integrate_ladder(model, ladder, f, t_grid, opt);
        std::vector<double> row(g);
        for (std::size_t i = 0; i < g; ++i)
        {
            row[i] = values.at(top, i);
        }
        return row;
    });
    std::vector<EstimateCI> out;
    std::vector<double> column(n_paths);
    for (std::size_t i = 0; i < g; ++i)
    {
        for (std::size_t p = 0; p < n_paths; ++p)
        {
            column[p] = rows[p][i];
        }
        out.push_back(EstimateCI::from_samples(column));
    }
    return out;
}

inline EstimateCI survival_via_theorem(ValidatedModel const& model,
                                       DebtorSet targetC,
                                       double t,
                                       std::size_t n_paths,
                                       std::uint64_t seed,
                                       LadderOptions const& opt = {},
                                       std::size_t threads = default_threads())
{
    return survival_via_theorem(model, targetC, std::vector<double>{t}, n_paths, seed, opt, threads)
        .front();
}

//---------------------------------------------------------------------------//
struct JointBResult
{
    EstimateCI estimate;
    bool invalid_D = false;
    std::string note;
};

/*!
 * Probability that C survives past t while every debtor of D has a B-type
 * default by t.
 *
 * A non-systemic member of D makes the event impossible; the exact zero is
 * returned with the invalid flag set.
 */
inline JointBResult joint_b_default_via_theorem(ValidatedModel const& model,
                                                DebtorSet C,
                                                DebtorSet D,
                                                double t,
                                                std::size_t n_paths,
                                                std::uint64_t seed,
                                                LadderOptions const& opt = {},
                                                std::size_t threads = default_threads())
{
    if (!C.disjoint(D) || !(C | D).subset_of(model.all()))
    {
        throw std::invalid_argument(
            "joint_b_default_via_theorem: C and D must be disjoint debtor sets");
    }
    JointBResult result;
    if (!D.subset_of(model.systemic_set()))
    {
        result.estimate = EstimateCI::exact(0.0);
        result.invalid_D = true;
        result.note = "D contains a non-systemic debtor " + (D - model.systemic_set()).to_string()
                      + "; the event has probability zero";
        return result;
    }
    if (D.empty())
    {
        result.estimate = survival_via_theorem(model, C, t, n_paths, seed, opt, threads);
        return result;
    }
    auto ladder = build_ladder(model, C);
    std::size_t const node = ladder.index_of(ladder.S_star(), D);
    std::vector<double> grid{t};
    auto xs = parallel_map(n_paths, threads, [&](std::size_t p) {
        auto f = simulate_fbar_path(model, C, PathKey{seed, p});
        double weight = 1;
        D.for_each([&](std::size_t j) { weight *= f.T(j) <= t ? model.p0(j) : 0.0; });
        if (weight == 0)
        {
            return 0.0;
        }
        return weight * integrate_ladder(model, ladder, f, grid, opt).at(node, 0);
    });
    result.estimate = EstimateCI::from_samples(xs);
    return result;
}

//---------------------------------------------------------------------------//
/*!
 * Explicit product form of the (S|D) density along a path whose debtors in
 * S = N - C carry defaults and whose environment events are recorded.
 *
 * Debtors of D count through their environment event T(j) in place of a
 * B-type default.
 */
inline double L_pathwise(ValidatedModel const& model,
                         DebtorSet C,
                         DebtorSet D,
                         SystemPath const& path,
                         double t)
{
    if (!C.disjoint(D))
    {
        throw std::invalid_argument("L_pathwise: C and D must be disjoint");
    }
    std::size_t const n = model.n();
    DebtorSet const S = model.all() - C;
    DebtorSet const free = S - D;
    double log_L = 0;
    double jumps = 1;

    // Start of the environment-channel impact of j in S.
    auto b_start = [&](std::size_t j) {
        return D.contains(j) ? path.T(j) : path.tauB(j);
    };
    // int_0^end of the A-channel impact on i from free debtors.
    auto a_impact_integral = [&](std::size_t i, double end) {
        double total = 0;
        free.for_each([&](std::size_t j) {
            double u = path.tauA(j);
            if (u < end)
            {
                total += model.phiA(i, j).integral(u, end);
            }
        });
        return total;
    };
    auto a_impact_at = [&](std::size_t i, double s) {
        double total = 0;
        free.for_each([&](std::size_t j) {
            if (path.tauA(j) < s)
            {
                total += model.phiA(i, j)(s);
            }
        });
        return total;
    };

    free.for_each([&](std::size_t i) {
        log_L -= a_impact_integral(i, std::min(t, path.tau(i)));
        double s = path.tauA(i);
        if (s <= t)
        {
            jumps *= 1 + a_impact_at(i, s) / model.alpha(i)(s);
        }
    });

    for (std::size_t i = 0; i < n; ++i)
    {
        double end = std::min(t, path.T(i));
        bool thinned = C.contains(i);
        double impact_at_T = 0;
        S.for_each([&](std::size_t j) {
            double u = b_start(j);
            auto const& phi = model.phiB(i, j);
            if (u < end)
            {
                log_L -= phi.integral(u, end);
                if (thinned)
                {
                    log_L += model.hazard(i).g_weighted_integral(phi, u, end);
                }
            }
            if (path.T(i) <= t && u < path.T(i))
            {
                impact_at_T += phi(path.T(i));
            }
        });
        if (path.T(i) <= t)
        {
            jumps *= 1 + impact_at_T / model.gamma(i)(path.T(i));
        }
    }

    C.for_each([&](std::size_t i) {
        auto const& h = model.hazard(i);
        double endT = std::min(t, path.T(i));
        log_L -= model.alpha(i).integral(t) + h.gamma_g_integral(endT);
        log_L -= a_impact_integral(i, t);
        S.for_each([&](std::size_t j) {
            double u = b_start(j);
            if (u < endT)
            {
                log_L -= h.g_weighted_integral(model.phiB(i, j), u, endT);
            }
        });
    });

    D.for_each([&](std::size_t j) {
        log_L -= a_impact_integral(j, std::min(t, path.T(j)));
    });

    return jumps * std::exp(log_L);
}

//---------------------------------------------------------------------------//
}  // namespace overspill
