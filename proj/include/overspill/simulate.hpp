//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/simulate.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "debtor_set.hpp"
#include "model.hpp"
#include "path.hpp"
#include "rng.hpp"

namespace overspill
{
//---------------------------------------------------------------------------//
//! Master seed plus path index; every stream of a path derives from it.
struct PathKey
{
    std::uint64_t seed = 0;
    std::uint64_t path = 0;

    RngStream stream(std::size_t debtor, StreamPurpose purpose) const
    {
        return RngStream(RngStreamKey{
            seed, path, static_cast<std::uint32_t>(debtor), purpose});
    }
};

namespace detail
{
struct DefaultTimes
{
    double tauA = kInfinity;
    double tauB = kInfinity;
};

/*!
 * Threshold construction for one debtor given its environment event time:
 * the first time the hazard (continuous part plus the jump at T) reaches e.
 */
inline DefaultTimes
threshold_default(ValidatedModel const& model, std::size_t k, double e, double T)
{
    DefaultTimes out;
    auto const& alpha = model.alpha(k);
    double a = alpha.inverse_integral(e);
    if (a <= T)
    {
        if (a <= model.horizon())
        {
            out.tauA = a;
        }
        return out;
    }
    double J = hazard_jump(model, k, T);
    double remaining = e - alpha.integral(T);
    if (remaining <= J)
    {
        out.tauB = T;
        return out;
    }
    a = alpha.inverse_integral(e - J);
    if (a <= model.horizon())
    {
        out.tauA = a;
    }
    return out;
}

inline double censor(ValidatedModel const& model, double t)
{
    return t <= model.horizon() ? t : kInfinity;
}

inline SystemPath assemble(std::size_t n,
                           std::vector<double> const& T,
                           std::vector<DefaultTimes> const& d)
{
    std::vector<SystemEvent> events;
    for (std::size_t k = 0; k < n; ++k)
    {
        if (d[k].tauA != kInfinity)
        {
            events.push_back({d[k].tauA, EventKind::ADefault, k, false});
        }
        if (T[k] != kInfinity)
        {
            events.push_back({T[k], EventKind::TEvent, k, d[k].tauB == T[k]});
        }
    }
    std::sort(events.begin(), events.end());
    SystemPath path(n);
    for (auto const& e : events)
    {
        path.record(e);
    }
    return path;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Simulate one path under the baseline measure (no contagion).
 *
 * Each debtor draws a unit exponential threshold and an environment clock;
 * default is the first time the hazard, including its jump at T, reaches the
 * threshold.
 */
inline SystemPath simulate_p0_path(ValidatedModel const& model, PathKey key)
{
    std::size_t const n = model.n();
    std::vector<double> T(n);
    std::vector<double> e(n);
    std::vector<detail::DefaultTimes> d(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        e[k] = key.stream(k, StreamPurpose::Threshold).exponential();
        double E = key.stream(k, StreamPurpose::Environment).exponential();
        T[k] = detail::censor(model, model.gamma(k).inverse_integral(E));
        d[k] = detail::threshold_default(model, k, e[k], T[k]);
    }
    auto path = detail::assemble(n, T, d);
    path.set_thresholds(std::move(e));
    return path;
}

//---------------------------------------------------------------------------//
/*!
 * Simulate one path under the contagion measure with contagious set C.
 *
 * Competing risks with tilted intensities: the A channel of alive debtor i
 * runs at alpha(i) + sum over A-defaulted j in C of phiA(i, j), the
 * environment clock of i at gamma(i) + sum over B-defaulted j in C of
 * phiB(i, j). Both channels consume a unit exponential residual by time
 * change; at T(i) an alive debtor defaults iff its A residual is within the
 * hazard jump, which happens with probability g. Draws coincide with the
 * baseline sampler when C is empty.
 */
inline SystemPath
simulate_contagion_path(ValidatedModel const& model, DebtorSet C, PathKey key)
{
    std::size_t const n = model.n();
    double const H = model.horizon();
    std::vector<double> RA(n);
    std::vector<double> RT(n);
    std::vector<double> e(n);
    std::vector<char> alive(n, 1);
    std::vector<char> pending(n, 1);
    std::vector<char> hitA(n, 0);  // A-defaulted and contagious
    std::vector<char> hitB(n, 0);  // B-defaulted and contagious
    for (std::size_t k = 0; k < n; ++k)
    {
        e[k] = key.stream(k, StreamPurpose::Threshold).exponential();
        RA[k] = e[k];
        RT[k] = key.stream(k, StreamPurpose::Environment).exponential();
    }

    SystemPath path(n);
    std::vector<double> rateA(n);
    std::vector<double> rateT(n);
    double t = 0;
    while (t < H)
    {
        double t_knot = std::min(model.next_knot(t), H);
        for (std::size_t i = 0; i < n; ++i)
        {
            rateA[i] = 0;
            rateT[i] = 0;
            if (alive[i])
            {
                double r = model.alpha(i)(t);
                for (std::size_t j = 0; j < n; ++j)
                {
                    if (hitA[j])
                    {
                        r += model.phiA(i, j)(t);
                    }
                }
                rateA[i] = r;
            }
            if (pending[i])
            {
                double r = model.gamma(i)(t);
                for (std::size_t j = 0; j < n; ++j)
                {
                    if (hitB[j])
                    {
                        r += model.phiB(i, j)(t);
                    }
                }
                rateT[i] = r;
            }
        }

        double best = kInfinity;
        std::size_t winner = n;
        bool winner_is_A = false;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (alive[i] && rateA[i] > 0)
            {
                double c = t + RA[i] / rateA[i];
                if (c < best)
                {
                    best = c;
                    winner = i;
                    winner_is_A = true;
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i)
        {
            if (pending[i] && rateT[i] > 0)
            {
                double c = t + RT[i] / rateT[i];
                if (c < best)
                {
                    best = c;
                    winner = i;
                    winner_is_A = false;
                }
            }
        }

        double t_next = std::min(best, t_knot);
        double dt = t_next - t;
        for (std::size_t i = 0; i < n; ++i)
        {
            RA[i] = std::max(0.0, RA[i] - rateA[i] * dt);
            RT[i] = std::max(0.0, RT[i] - rateT[i] * dt);
        }
        t = t_next;
        if (best > t_knot)
        {
            continue;
        }

        std::size_t i = winner;
        if (winner_is_A)
        {
            RA[i] = 0;
            alive[i] = 0;
            hitA[i] = C.contains(i);
            path.record({t, EventKind::ADefault, i, false});
        }
        else
        {
            RT[i] = 0;
            pending[i] = 0;
            bool defaulted = false;
            if (alive[i])
            {
                double J = hazard_jump(model, i, t);
                if (RA[i] <= J)
                {
                    defaulted = true;
                    alive[i] = 0;
                    hitB[i] = C.contains(i);
                }
                else
                {
                    RA[i] -= J;
                }
            }
            path.record({t, EventKind::TEvent, i, defaulted});
        }
    }
    path.set_thresholds(std::move(e));
    return path;
}

//---------------------------------------------------------------------------//
/*!
 * Simulate environment event times under the default-adjusted measure for C.
 *
 * For k in C the event intensity gamma(1 - g) is realized by thinning a
 * gamma-rate proposal stream; other debtors keep the baseline rate.
 */
inline FPath simulate_fbar_path(ValidatedModel const& model, DebtorSet C, PathKey key)
{
    std::size_t const n = model.n();
    FPath out{std::vector<double>(n, kInfinity)};
    for (std::size_t k = 0; k < n; ++k)
    {
        auto const& gamma = model.gamma(k);
        auto clock = key.stream(k, StreamPurpose::Environment);
        double E = clock.exponential();
        if (!C.contains(k) || !model.systemic(k))
        {
            out.T_times[k] = detail::censor(model, gamma.inverse_integral(E));
            continue;
        }
        auto coin = key.stream(k, StreamPurpose::Thinning);
        while (true)
        {
            double s = gamma.inverse_integral(E);
            if (!(s <= model.horizon()))
            {
                break;
            }
            if (coin.uniform() <= 1 - model.hazard(k).g(s))
            {
                out.T_times[k] = s;
                break;
            }
            E += clock.exponential();
        }
    }
    return out;
}

/*!
 * Extend an environment path with defaults of the debtors in \c who, using
 * the baseline threshold construction along the given event times.
 */
inline SystemPath with_threshold_defaults(ValidatedModel const& model,
                                          FPath const& f,
                                          DebtorSet who,
                                          PathKey key)
{
    std::size_t const n = model.n();
    std::vector<detail::DefaultTimes> d(n);
    std::vector<double> e(n, kInfinity);
    who.for_each([&](std::size_t k) {
        e[k] = key.stream(k, StreamPurpose::Threshold).exponential();
        d[k] = detail::threshold_default(model, k, e[k], f.T_times[k]);
    });
    auto path = detail::assemble(n, f.T_times, d);
    path.set_thresholds(std::move(e));
    return path;
}

//! Default-adjusted environment for C with baseline-hazard defaults in N - C.
inline SystemPath
simulate_fbar_path_with_defaults(ValidatedModel const& model, DebtorSet C, PathKey key)
{
    return with_threshold_defaults(
        model, simulate_fbar_path(model, C, key), model.all() - C, key);
}

//---------------------------------------------------------------------------//
}  // namespace overspill
