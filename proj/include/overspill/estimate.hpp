//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/estimate.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "debtor_set.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "path.hpp"
#include "simulate.hpp"
#include "stats.hpp"
#include "weights.hpp"

namespace overspill
{
//---------------------------------------------------------------------------//
enum class LawKind
{
    P0,          //!< baseline, no contagion
    PC,          //!< contagion measure, sampled directly
    WeightedP0,  //!< baseline paths reweighted by the contagion density
};

struct Law
{
    LawKind kind = LawKind::P0;
    DebtorSet contagious;

    static Law p0() { return {LawKind::P0, {}}; }
    static Law pc(DebtorSet C) { return {LawKind::PC, C}; }
    static Law weighted_p0(DebtorSet C) { return {LawKind::WeightedP0, C}; }
};

inline SystemPath sample_path(ValidatedModel const& model, Law const& law, PathKey key)
{
    return law.kind == LawKind::PC
               ? simulate_contagion_path(model, law.contagious, key)
               : simulate_p0_path(model, key);
}

//---------------------------------------------------------------------------//
//! A path event observed at time t.
struct PathEvent
{
    double t = 1.0;
    std::function<bool(SystemPath const&)> holds;
    std::string label;
};

//! Every debtor in C survives past t.
inline PathEvent survival_event(DebtorSet C, double t)
{
    return {t,
            [C, t](SystemPath const& p) {
                bool ok = true;
                C.for_each([&](std::size_t k) { ok = ok && p.survives(k, t); });
                return ok;
            },
            "survive" + C.to_string()};
}

//! C survives past t and every debtor of D has a B-type default by t.
inline PathEvent joint_b_event(DebtorSet C, DebtorSet D, double t)
{
    return {t,
            [C, D, t](SystemPath const& p) {
                bool ok = true;
                C.for_each([&](std::size_t k) { ok = ok && p.survives(k, t); });
                D.for_each([&](std::size_t j) { ok = ok && p.tauB(j) <= t; });
                return ok;
            },
            "survive" + C.to_string() + "_B" + D.to_string()};
}

//---------------------------------------------------------------------------//
/*!
 * Estimate several event probabilities from one common set of paths.
 *
 * Under the weighted law each indicator is multiplied by the contagion
 * density at the event's own observation time.
 */
inline std::vector<EstimateCI>
estimate_probabilities(ValidatedModel const& model,
                       Law const& law,
                       std::vector<PathEvent> const& events,
                       std::size_t n_paths,
                       std::uint64_t seed,
                       std::size_t threads = default_threads())
{
    if (n_paths < 100)
    {
        throw std::invalid_argument("estimate_probability: need at least 100 paths");
    }
    for (auto const& e : events)
    {
        if (!(e.t >= 0 && e.t <= model.horizon()))
        {
            throw std::out_of_range("estimate_probability: event time outside horizon");
        }
    }
    std::size_t const m = events.size();
    auto rows = parallel_map(n_paths, threads, [&](std::size_t p) {
        auto path = sample_path(model, law, PathKey{seed, p});
        std::vector<double> row(m);
        for (std::size_t e = 0; e < m; ++e)
        {
            double x = events[e].holds(path) ? 1.0 : 0.0;
            if (law.kind == LawKind::WeightedP0 && x != 0)
            {
                x *= girsanov_weight(model, law.contagious, path, events[e].t);
            }
            row[e] = x;
        }
        return row;
    });
    std::vector<EstimateCI> out;
    std::vector<double> column(n_paths);
    for (std::size_t e = 0; e < m; ++e)
    {
        for (std::size_t p = 0; p < n_paths; ++p)
        {
            column[p] = rows[p][e];
        }
        out.push_back(EstimateCI::from_samples(column));
    }
    return out;
}

inline EstimateCI estimate_probability(ValidatedModel const& model,
                                       Law const& law,
                                       PathEvent const& event,
                                       std::size_t n_paths,
                                       std::uint64_t seed,
                                       std::size_t threads = default_threads())
{
    return estimate_probabilities(model, law, {event}, n_paths, seed, threads)
        .front();
}

//---------------------------------------------------------------------------//
/*!
 * Mean of an arbitrary per-path statistic of environment paths drawn under
 * the default-adjusted measure for C.
 */
template<class F>
EstimateCI estimate_fbar_mean(ValidatedModel const& model,
                              DebtorSet C,
                              std::size_t n_paths,
                              std::uint64_t seed,
                              std::size_t threads,
                              F&& statistic)
{
    auto xs = parallel_map(n_paths, threads, [&](std::size_t p) {
        return static_cast<double>(
            statistic(simulate_fbar_path(model, C, PathKey{seed, p})));
    });
    return EstimateCI::from_samples(xs);
}

//! Mean of a per-path statistic of baseline or contagion paths.
template<class F>
EstimateCI estimate_path_mean(ValidatedModel const& model,
                              Law const& law,
                              std::size_t n_paths,
                              std::uint64_t seed,
                              std::size_t threads,
                              F&& statistic)
{
    auto xs = parallel_map(n_paths, threads, [&](std::size_t p) {
        return static_cast<double>(
            statistic(sample_path(model, law, PathKey{seed, p})));
    });
    return EstimateCI::from_samples(xs);
}

//---------------------------------------------------------------------------//
}  // namespace overspill
