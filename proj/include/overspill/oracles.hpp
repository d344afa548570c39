//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/oracles.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "debtor_set.hpp"
#include "model.hpp"
#include "piecewise.hpp"

namespace overspill
{
//---------------------------------------------------------------------------//
/*!
 * Closed-form survival probability of a single name with no contagion.
 *
 * Evaluates exp(-int alpha) [1 - p0 int_0^t gamma_s exp(int_0^s (alpha -
 * gamma)) ds] segment by segment on the merged breakpoints of alpha, gamma.
 */
inline double single_name_survival_oracle(PiecewiseConstant const& alpha,
                                          PiecewiseConstant const& gamma,
                                          double p0,
                                          double t)
{
    if (!(t >= 0) || !std::isfinite(t))
    {
        throw std::out_of_range("single_name_survival_oracle: bad time");
    }
    if (p0 * std::exp(alpha.integral(t)) >= 1)
    {
        throw std::domain_error(
            "single_name_survival_oracle: cap violated (g reaches 1)");
    }
    std::vector<double> cuts = alpha.breaks();
    cuts.insert(cuts.end(), gamma.breaks().begin(), gamma.breaks().end());
    cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double jump_mass = 0;
    for (std::size_t i = 0; i + 1 < cuts.size() && cuts[i] < t; ++i)
    {
        double u = cuts[i];
        double h = std::min(cuts[i + 1], t) - u;
        double a = alpha(u);
        double c = gamma(u);
        jump_mass += c * std::exp(alpha.integral(u) - gamma.integral(u))
                     * expm1_ratio(a - c, h);
    }
    return std::exp(-alpha.integral(t)) * (1 - p0 * jump_mass);
}

//---------------------------------------------------------------------------//
namespace detail
{
inline void require_markovian(ValidatedModel const& model, char const* who)
{
    for (std::size_t k = 0; k < model.n(); ++k)
    {
        if (model.p0(k) != 0)
        {
            throw std::invalid_argument(std::string(who)
                                        + ": requires p0 = 0 for every debtor");
        }
    }
}
}  // namespace detail

/*!
 * Generator of the default-indicator chain at a fixed time.
 *
 * States are default masks; from state x, debtor k (alive in x) defaults at
 * rate alpha(k) + sum_j phiA(k, j) x(j).
 */
struct GeneratorMatrix
{
    std::size_t n = 0;
    double time = 0;
    std::vector<double> flip_rate;  //!< [state * n + k]

    std::size_t num_states() const { return std::size_t{1} << n; }

    double q(std::size_t x, std::size_t y) const
    {
        if (x == y)
        {
            return -this->exit_rate(x);
        }
        std::size_t diff = x ^ y;
        if ((diff & (diff - 1)) != 0 || (y & diff) == 0)
        {
            return 0;
        }
        return flip_rate[x * n + static_cast<std::size_t>(std::countr_zero(diff))];
    }

    double exit_rate(std::size_t x) const
    {
        double r = 0;
        for (std::size_t k = 0; k < n; ++k)
        {
            r += flip_rate[x * n + k];
        }
        return r;
    }
};

inline GeneratorMatrix markov_generator(ValidatedModel const& model, double t)
{
    detail::require_markovian(model, "markov_generator");
    if (model.n() > 12)
    {
        throw std::invalid_argument("markov_generator: at most 12 debtors");
    }
    std::size_t const n = model.n();
    GeneratorMatrix g{n, t, std::vector<double>((std::size_t{1} << n) * n, 0.0)};
    for (std::size_t x = 0; x < g.num_states(); ++x)
    {
        for (std::size_t k = 0; k < n; ++k)
        {
            if ((x >> k) & 1u)
            {
                continue;
            }
            double r = model.alpha(k)(t);
            for (std::size_t j = 0; j < n; ++j)
            {
                if ((x >> j) & 1u)
                {
                    r += model.phiA(k, j)(t);
                }
            }
            g.flip_rate[x * n + k] = r;
        }
    }
    return g;
}

/*!
 * Probability that no debtor of C has defaulted by t in the Markov chain,
 * via uniformization on each interval of constant coefficients.
 */
inline double
markov_joint_survival(ValidatedModel const& model, DebtorSet C, double t)
{
    detail::require_markovian(model, "markov_joint_survival");
    if (model.n() > 12)
    {
        throw std::invalid_argument("markov_joint_survival: at most 12 debtors");
    }
    if (C.empty())
    {
        return 1.0;
    }
    std::size_t const n = model.n();
    std::size_t const states = std::size_t{1} << n;
    std::vector<double> v(states, 0.0);
    std::vector<double> term(states);
    std::vector<double> next(states);
    std::vector<double> acc(states);
    v[0] = 1;

    double a = 0;
    while (a < t)
    {
        double b = std::min(model.next_knot(a), t);
        auto gen = markov_generator(model, a);
        double Lambda = 0;
        for (std::size_t x = 0; x < states; ++x)
        {
            Lambda = std::max(Lambda, gen.exit_rate(x));
        }
        double span = b - a;
        if (Lambda > 0)
        {
            auto substeps = static_cast<std::size_t>(std::ceil(Lambda * span / 8.0));
            substeps = std::max<std::size_t>(substeps, 1);
            double h = span / static_cast<double>(substeps);
            double mu = Lambda * h;
            for (std::size_t s = 0; s < substeps; ++s)
            {
                // v <- sum_k Poisson(k; mu) P^k v with P = I + Q / Lambda
                double weight = std::exp(-mu);
                double cumulative = weight;
                term = v;
                for (std::size_t x = 0; x < states; ++x)
                {
                    acc[x] = weight * term[x];
                }
                for (std::size_t k = 1; 1 - cumulative > 1e-12 && k < 10000; ++k)
                {
                    std::fill(next.begin(), next.end(), 0.0);
                    for (std::size_t x = 0; x < states; ++x)
                    {
                        if (term[x] == 0)
                        {
                            continue;
                        }
                        double stay = 1 - gen.exit_rate(x) / Lambda;
                        next[x] += stay * term[x];
                        for (std::size_t j = 0; j < n; ++j)
                        {
                            double r = gen.flip_rate[x * n + j];
                            if (r > 0)
                            {
                                next[x | (std::size_t{1} << j)] += r / Lambda * term[x];
                            }
                        }
                    }
                    term.swap(next);
                    weight *= mu / static_cast<double>(k);
                    cumulative += weight;
                    for (std::size_t x = 0; x < states; ++x)
                    {
                        acc[x] += weight * term[x];
                    }
                }
                v = acc;
            }
        }
        a = b;
    }
    double survive = 0;
    for (std::size_t x = 0; x < states; ++x)
    {
        if ((x & C.mask()) == 0)
        {
            survive += v[x];
        }
    }
    return survive;
}

//---------------------------------------------------------------------------//
/*!
 * Deterministic subset recursion for p0 = 0, integrated with classical RK4
 * on a fixed fine step between coefficient breakpoints.
 *
 * For S within N - C (and C' = N - S): l^S' = -l^S (alpha(C') + phiA(C', S))
 * + sum_{j in S} l^{S - j} phiA(C', j). Returns l^{N - C} on the grid.
 */
inline std::vector<double> case2_ode_survival(ValidatedModel const& model,
                                              DebtorSet targetC,
                                              std::vector<double> const& t_grid,
                                              double max_step = 1e-3)
{
    detail::require_markovian(model, "case2_ode_survival");
    DebtorSet const S_star = model.all() - targetC;
    // Subsets of S* indexed by their compressed bit pattern.
    auto members = S_star.members();
    std::size_t const s = members.size();
    std::size_t const count = std::size_t{1} << s;
    auto expand = [&](std::size_t code) {
        DebtorSet S;
        for (std::size_t b = 0; b < s; ++b)
        {
            if ((code >> b) & 1u)
            {
                S = S.with(members[b]);
            }
        }
        return S;
    };

    std::vector<double> self(count);
    std::vector<std::vector<std::pair<std::size_t, double>>> feeds(count);
    auto build = [&](double t) {
        for (std::size_t code = 0; code < count; ++code)
        {
            DebtorSet S = expand(code);
            DebtorSet Cp = model.all() - S;
            double decay = 0;
            Cp.for_each([&](std::size_t i) { decay += model.alpha(i)(t); });
            feeds[code].clear();
            for (std::size_t b = 0; b < s; ++b)
            {
                if (!((code >> b) & 1u))
                {
                    continue;
                }
                double psi = 0;
                Cp.for_each(
                    [&](std::size_t k) { psi += model.phiA(k, members[b])(t); });
                decay += psi;
                feeds[code].emplace_back(code & ~(std::size_t{1} << b), psi);
            }
            self[code] = -decay;
        }
    };
    auto rhs = [&](std::vector<double> const& y, std::vector<double>& dy) {
        for (std::size_t code = 0; code < count; ++code)
        {
            double d = self[code] * y[code];
            for (auto const& [src, c] : feeds[code])
            {
                d += c * y[src];
            }
            dy[code] = d;
        }
    };

    std::vector<double> y(count, 1.0);
    std::vector<double> k1(count), k2(count), k3(count), k4(count), tmp(count);
    std::vector<double> out;
    double t = 0;
    for (double target : t_grid)
    {
        if (target < t)
        {
            throw std::invalid_argument("case2_ode_survival: grid must be sorted");
        }
        while (t < target)
        {
            double b = std::min(model.next_knot(t), target);
            build(t);
            auto steps = static_cast<std::size_t>(std::ceil((b - t) / max_step));
            steps = std::max<std::size_t>(steps, 1);
            double h = (b - t) / static_cast<double>(steps);
            for (std::size_t st = 0; st < steps; ++st)
            {
                rhs(y, k1);
                for (std::size_t i = 0; i < count; ++i)
                    tmp[i] = y[i] + 0.5 * h * k1[i];
                rhs(tmp, k2);
                for (std::size_t i = 0; i < count; ++i)
                    tmp[i] = y[i] + 0.5 * h * k2[i];
                rhs(tmp, k3);
                for (std::size_t i = 0; i < count; ++i)
                    tmp[i] = y[i] + h * k3[i];
                rhs(tmp, k4);
                for (std::size_t i = 0; i < count; ++i)
                    y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            }
            t = b;
        }
        out.push_back(y[count - 1]);
    }
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace overspill
