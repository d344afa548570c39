//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/ladder.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "debtor_set.hpp"
#include "model.hpp"

namespace overspill
{
//---------------------------------------------------------------------------//
inline constexpr std::size_t kMaxLadderSize = 12;
inline constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();

//! Number of (S, D) equations for |S*| = s with b systemic debtors.
inline std::uint64_t count_equations(std::size_t s, std::size_t b)
{
    if (b > s)
    {
        throw std::invalid_argument("count_equations: need b <= s");
    }
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < s; ++i)
    {
        result *= i < b ? 3 : 2;
    }
    return result;
}

//---------------------------------------------------------------------------//
//! Reference from a node to the nodes feeding it through debtor j.
struct LadderEdge
{
    std::size_t j;
    std::size_t sub;  //!< (S - j, D)
    std::size_t up;   //!< (S, D + j), or kNoNode when j is not systemic
};

struct LadderNode
{
    DebtorSet S;
    DebtorSet D;
    DebtorSet C;  //!< N - S
    std::vector<LadderEdge> edges;  //!< one per j in S - D
};

/*!
 * Dependency-ordered subset lattice for a target set.
 *
 * Nodes are sorted by (|S|, S, -|D|, D), so every node appears after the
 * nodes it references.
 */
class Ladder
{
  public:
    DebtorSet target() const { return target_; }
    DebtorSet S_star() const { return S_star_; }
    DebtorSet universe() const { return universe_; }
    std::vector<LadderNode> const& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    LadderNode const& operator[](std::size_t i) const { return nodes_[i]; }

    std::size_t index_of(DebtorSet S, DebtorSet D) const
    {
        auto it = index_.find(key(S, D));
        return it == index_.end() ? kNoNode : it->second;
    }

    //! The node (S*, {}) whose value gives the target survival probability.
    std::size_t top() const { return this->index_of(S_star_, {}); }

    friend Ladder build_ladder(DebtorSet, DebtorSet, DebtorSet);

  private:
    DebtorSet target_;
    DebtorSet S_star_;
    DebtorSet universe_;
    std::vector<LadderNode> nodes_;
    std::unordered_map<std::uint64_t, std::size_t> index_;

    static std::uint64_t key(DebtorSet S, DebtorSet D)
    {
        return (std::uint64_t{S.mask()} << 32) | D.mask();
    }
};

/*!
 * Build the ladder over a universe of debtors with the given systemic subset.
 */
inline Ladder build_ladder(DebtorSet universe, DebtorSet systemic, DebtorSet target)
{
    if (!target.subset_of(universe))
    {
        throw std::invalid_argument("build_ladder: target outside the universe");
    }
    Ladder L;
    L.universe_ = universe;
    L.target_ = target;
    L.S_star_ = universe - target;
    if (L.S_star_.size() > kMaxLadderSize)
    {
        throw std::invalid_argument("build_ladder: at most "
                                    + std::to_string(kMaxLadderSize)
                                    + " debtors outside the target");
    }
    L.S_star_.for_each_subset([&](DebtorSet S) {
        (S & systemic).for_each_subset([&](DebtorSet D) {
            L.nodes_.push_back({S, D, universe - S, {}});
        });
    });
    std::sort(L.nodes_.begin(), L.nodes_.end(), [](auto const& a, auto const& b) {
        if (a.S != b.S)
        {
            return a.S < b.S;
        }
        if (a.D.size() != b.D.size())
        {
            return a.D.size() > b.D.size();
        }
        return a.D.mask() < b.D.mask();
    });
    for (std::size_t i = 0; i < L.nodes_.size(); ++i)
    {
        L.index_[Ladder::key(L.nodes_[i].S, L.nodes_[i].D)] = i;
    }
    for (auto& node : L.nodes_)
    {
        (node.S - node.D).for_each([&](std::size_t j) {
            LadderEdge e{j, L.index_of(node.S.without(j), node.D), kNoNode};
            if (systemic.contains(j))
            {
                e.up = L.index_of(node.S, node.D.with(j));
            }
            node.edges.push_back(e);
        });
    }
    return L;
}

inline Ladder build_ladder(ValidatedModel const& model, DebtorSet target)
{
    return build_ladder(model.all(), model.systemic_set(), target);
}

//---------------------------------------------------------------------------//
// Drift and jump coefficients
//---------------------------------------------------------------------------//

enum class DriftForm
{
    Canonical,         //!< re-derived drift with the environment weight on l^{S-j|D}
    UnweightedSubset,  //!< canonical signs without the environment weight
    Verbatim43,        //!< sign pattern exactly as printed in the theorem
};

inline char const* to_cstring(DriftForm f)
{
    switch (f)
    {
        case DriftForm::Canonical:
            return "canonical";
        case DriftForm::UnweightedSubset:
            return "unweighted-subset";
        case DriftForm::Verbatim43:
            return "verbatim";
    }
    return "unknown";
}

//! Time-dependent factor of a drift term inside an interval.
enum class Multiplier : std::uint8_t
{
    None,
    G,     //!< g_t(debtor)
    ExpG,  //!< exp(int_0^t gamma g)(debtor)
};

struct TaggedTerm
{
    std::size_t dst;
    std::size_t src;
    double coeff;
    Multiplier mult = Multiplier::None;
    std::size_t debtor = 0;
};

/*!
 * Environment weight exp(int_0^{t ^ T} gamma g) (1 - g_T)^{1{T <= t}} of
 * debtor j.
 */
inline double environment_weight(ValidatedModel const& model,
                                 std::size_t j,
                                 double t,
                                 double T)
{
    auto const& h = model.hazard(j);
    if (T <= t)
    {
        return std::exp(h.gamma_g_integral(T)) * (1 - h.g(T));
    }
    return std::exp(h.gamma_g_integral(t));
}

/*!
 * Append the drift of one node on an interval where the set of past
 * environment events is fixed; coefficients are read at \c t.
 */
inline void append_drift_terms(ValidatedModel const& model,
                               Ladder const& ladder,
                               std::size_t node_index,
                               double t,
                               DebtorSet past,
                               std::span<double const> T_times,
                               DriftForm form,
                               std::vector<TaggedTerm>& out)
{
    auto const& node = ladder[node_index];
    DebtorSet const pending = ladder.universe() - past;

    double self = 0;
    node.C.for_each([&](std::size_t i) {
        self -= model.alpha(i)(t);
        if (pending.contains(i) && model.systemic(i))
        {
            out.push_back({node_index, node_index, -model.gamma(i)(t), Multiplier::G, i});
        }
    });
    (node.D & past).for_each([&](std::size_t j) {
        pending.for_each([&](std::size_t k) { self -= model.phiB(k, j)(t); });
    });

    for (auto const& e : node.edges)
    {
        std::size_t const j = e.j;
        double psi = 0;
        node.C.for_each([&](std::size_t k) { psi += model.phiA(k, j)(t); });
        (node.D & pending).for_each([&](std::size_t k) { psi += model.phiA(k, j)(t); });

        self += form == DriftForm::Verbatim43 ? psi : -psi;

        if (psi != 0)
        {
            switch (form)
            {
                case DriftForm::Canonical:
                    if (!model.systemic(j))
                    {
                        out.push_back({node_index, e.sub, psi});
                    }
                    else if (past.contains(j))
                    {
                        out.push_back({node_index,
                                       e.sub,
                                       psi * environment_weight(model, j, t, T_times[j])});
                    }
                    else
                    {
                        out.push_back({node_index, e.sub, psi, Multiplier::ExpG, j});
                    }
                    break;
                case DriftForm::UnweightedSubset:
                    out.push_back({node_index, e.sub, psi});
                    break;
                case DriftForm::Verbatim43:
                    out.push_back({node_index, e.sub, -psi});
                    break;
            }
        }
        if (e.up != kNoNode && past.contains(j))
        {
            double dn = 0;
            pending.for_each([&](std::size_t k) { dn += model.phiB(k, j)(t); });
            double c = model.p0(j) * (psi - dn);
            if (c != 0)
            {
                out.push_back({node_index, e.up, c});
            }
        }
    }
    out.push_back({node_index, node_index, self});
}

/*!
 * Append the jump of one node at the environment event of debtor k at
 * time s; \c past holds the debtors whose events are strictly before s.
 * The increment is a combination of pre-jump values.
 */
inline void append_jump_terms(ValidatedModel const& model,
                              Ladder const& ladder,
                              std::size_t node_index,
                              std::size_t k,
                              double s,
                              DebtorSet past,
                              std::vector<TaggedTerm>& out)
{
    auto const& node = ladder[node_index];
    double const gk = model.gamma(k)(s);
    double self = 0;
    (node.D & past).for_each([&](std::size_t j) { self += model.phiB(k, j)(s) / gk; });
    if (self != 0)
    {
        out.push_back({node_index, node_index, self});
    }
    for (auto const& e : node.edges)
    {
        if (e.up != kNoNode && past.contains(e.j))
        {
            double c = model.p0(e.j) * model.phiB(k, e.j)(s) / gk;
            if (c != 0)
            {
                out.push_back({node_index, e.up, c});
            }
        }
    }
}

//---------------------------------------------------------------------------//
//! Drift coefficient of one source node, multipliers evaluated.
struct DriftTerm
{
    std::size_t src;
    double coeff;
};

/*!
 * Drift of node \c node_index at time t on the given environment path,
 * merged by source node and sorted by source index.
 */
inline std::vector<DriftTerm> drift_terms(ValidatedModel const& model,
                                          Ladder const& ladder,
                                          std::size_t node_index,
                                          double t,
                                          std::span<double const> T_times,
                                          DriftForm form = DriftForm::Canonical)
{
    DebtorSet past;
    for (std::size_t k = 0; k < T_times.size(); ++k)
    {
        if (T_times[k] < t)
        {
            past = past.with(k);
        }
    }
    std::vector<TaggedTerm> tagged;
    append_drift_terms(model, ladder, node_index, t, past, T_times, form, tagged);
    std::map<std::size_t, double> merged;
    for (auto const& term : tagged)
    {
        double m = 1;
        if (term.mult == Multiplier::G)
        {
            m = model.hazard(term.debtor).g(t);
        }
        else if (term.mult == Multiplier::ExpG)
        {
            m = std::exp(model.hazard(term.debtor).gamma_g_integral(t));
        }
        merged[term.src] += term.coeff * m;
    }
    std::vector<DriftTerm> out;
    for (auto const& [src, c] : merged)
    {
        out.push_back({src, c});
    }
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace overspill
