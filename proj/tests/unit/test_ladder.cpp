//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/unit/test_ladder.cpp
//---------------------------------------------------------------------------//
#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "overspill/overspill.hpp"
#include "support/models.hpp"

using namespace overspill;
using overspill::test::constant_spec;

namespace
{
std::vector<double> const kNoEvents(6, kInfinity);

//! Dyadic coefficients keep every sum in the drift exact.
ModelSpec dyadic_spec(bool systemic, bool with_B)
{
    std::vector<std::vector<double>> A{{0, 0.25, 0.125, 0.5},
                                       {0.375, 0, 0.25, 0.0625},
                                       {0.5, 0.125, 0, 0.25},
                                       {0.0625, 0.5, 0.375, 0}};
    std::vector<std::vector<double>> B{{0, 0.5, 0.25, 0.125},
                                       {0.25, 0, 0.5, 0.125},
                                       {0.125, 0.25, 0, 0.5},
                                       {0.5, 0.125, 0.25, 0}};
    return constant_spec({0.125, 0.25, 0.0625, 0.1875},
                         {0.5, 0.75, 0.25, 1.0},
                         {systemic ? 0.125 : 0.0, systemic ? 0.25 : 0.0, 0.0, 0.0},
                         A,
                         with_B ? B : std::vector<std::vector<double>>{},
                         1.0);
}

std::map<std::size_t, double> as_map(std::vector<DriftTerm> const& terms)
{
    std::map<std::size_t, double> out;
    for (auto const& t : terms)
    {
        out[t.src] = t.coeff;
    }
    return out;
}
}  // namespace

//---------------------------------------------------------------------------//
TEST(CountEquations, Examples)
{
    EXPECT_EQ(count_equations(2, 2), 9u);
    EXPECT_EQ(count_equations(3, 1), 12u);
    EXPECT_EQ(count_equations(0, 0), 1u);
    EXPECT_EQ(count_equations(12, 12), 531441u);
    EXPECT_THROW(count_equations(1, 2), std::invalid_argument);
}

TEST(BuildLadder, FullTargetHasSingleNode)
{
    auto m = overspill::test::four_name();
    auto L = build_ladder(m, m.all());
    ASSERT_EQ(L.size(), 1u);
    EXPECT_TRUE(L[0].S.empty());
    EXPECT_TRUE(L[0].D.empty());
    EXPECT_EQ(L.top(), 0u);
}

TEST(BuildLadder, TwoNameOrder)
{
    auto m = validated(constant_spec({0.1, 0.1}, {0.5, 0.5}, {0.0, 0.2}, {}, {}, 1.0));
    auto L = build_ladder(m, DebtorSet{0});
    ASSERT_EQ(L.size(), 3u);
    EXPECT_EQ(L[0].S, DebtorSet{});
    EXPECT_EQ(L[1].S, DebtorSet{1});
    EXPECT_EQ(L[1].D, DebtorSet{1});
    EXPECT_EQ(L[2].S, DebtorSet{1});
    EXPECT_EQ(L[2].D, DebtorSet{});
    EXPECT_EQ(L.top(), 2u);
    ASSERT_EQ(L[2].edges.size(), 1u);
    EXPECT_EQ(L[2].edges[0].sub, 0u);
    EXPECT_EQ(L[2].edges[0].up, 1u);
}

TEST(BuildLadder, ThreeNameAllSystemic)
{
    auto m = validated(constant_spec({0.1, 0.1, 0.1}, {0.5, 0.5, 0.5}, {0.0, 0.2, 0.3}, {}, {}, 1.0));
    EXPECT_EQ(build_ladder(m, DebtorSet{0}).size(), count_equations(2, 2));
}

TEST(BuildLadder, ExhaustiveCountsAndPruning)
{
    for (std::size_t s = 0; s <= 6; ++s)
    {
        for (std::size_t b = 0; b <= s; ++b)
        {
            DebtorSet universe = DebtorSet::all(s + 1);
            DebtorSet systemic;
            for (std::size_t k = 0; k < b; ++k)
            {
                systemic = systemic.with(k + 1);
            }
            auto L = build_ladder(universe, systemic, DebtorSet{0});
            EXPECT_EQ(L.size(), count_equations(s, b)) << s << "," << b;
            for (std::size_t i = 0; i < L.size(); ++i)
            {
                auto const& node = L[i];
                EXPECT_TRUE(node.D.subset_of(node.S & systemic));
                EXPECT_EQ(node.C, universe - node.S);
                EXPECT_EQ(L.index_of(node.S, node.D), i);
                for (auto const& e : node.edges)
                {
                    EXPECT_LT(e.sub, i);
                    EXPECT_EQ(L[e.sub].S, node.S.without(e.j));
                    if (systemic.contains(e.j))
                    {
                        EXPECT_LT(e.up, i);
                        EXPECT_EQ(L[e.up].D, node.D.with(e.j));
                    }
                    else
                    {
                        EXPECT_EQ(e.up, kNoNode);
                    }
                }
            }
        }
    }
}

TEST(BuildLadder, TooLarge)
{
    EXPECT_THROW(build_ladder(DebtorSet::all(14), {}, DebtorSet{0}), std::invalid_argument);
    EXPECT_THROW(build_ladder(DebtorSet::all(3), {}, DebtorSet{5}), std::invalid_argument);
}

//---------------------------------------------------------------------------//
TEST(DriftTerms, ReducesToMarkovianFormWithoutEnvironmentDefaults)
{
    auto m = validated(dyadic_spec(false, true));
    std::vector<double> T(4, kInfinity);
    for (auto target : {DebtorSet{0}, DebtorSet{1, 2}, DebtorSet{3}})
    {
        auto L = build_ladder(m, target);
        for (std::size_t i = 0; i < L.size(); ++i)
        {
            auto const& node = L[i];
            ASSERT_TRUE(node.D.empty());
            // -l^S (lambda(C) + phiA(C, S)) + sum_j l^{S-j} phiA(C, j)
            std::map<std::size_t, double> expect;
            double lambda = 0;
            node.C.for_each([&](std::size_t k) { lambda += m.alpha(k)(0.5); });
            double total = 0;
            node.S.for_each([&](std::size_t j) {
                double phi = 0;
                node.C.for_each([&](std::size_t k) { phi += m.phiA(k, j)(0.5); });
                total += phi;
                if (phi != 0)
                {
                    expect[L.index_of(node.S.without(j), {})] += phi;
                }
            });
            expect[i] = -(lambda + total);
            auto got = as_map(drift_terms(m, L, i, 0.5, T));
            EXPECT_EQ(got, expect) << "node " << i;
        }
    }
}

TEST(DriftTerms, VerbatimSignsDiffer)
{
    auto m = validated(dyadic_spec(false, false));
    std::vector<double> T(4, kInfinity);
    auto L = build_ladder(m, DebtorSet{0});
    auto canonical = as_map(drift_terms(m, L, L.top(), 0.5, T));
    auto verbatim = as_map(drift_terms(m, L, L.top(), 0.5, T, DriftForm::Verbatim43));
    for (auto const& e : L[L.top()].edges)
    {
        EXPECT_EQ(verbatim[e.sub], -canonical[e.sub]);
    }
    EXPECT_NE(verbatim[L.top()], canonical[L.top()]);
}

TEST(DriftTerms, OnlyIndirectContagionWithoutDirectImpacts)
{
    auto spec = dyadic_spec(true, true);
    for (auto& row : spec.phiA)
    {
        for (auto& f : row)
        {
            f = PiecewiseConstant(0.0);
        }
    }
    auto m = validated(spec);
    std::vector<double> T{0.25, kInfinity, kInfinity, 0.5};
    auto L = build_ladder(m, DebtorSet{3});
    for (std::size_t i = 0; i < L.size(); ++i)
    {
        auto const& node = L[i];
        auto terms = drift_terms(m, L, i, 0.75, T);
        for (auto const& t : terms)
        {
            if (t.src == i)
            {
                continue;
            }
            // only the up-edges of past systemic debtors survive
            bool is_up = false;
            for (auto const& e : node.edges)
            {
                is_up = is_up || (e.up == t.src && T[e.j] < 0.75);
            }
            EXPECT_TRUE(is_up) << "node " << i << " src " << t.src;
        }
    }
}

TEST(DriftTerms, FullDefaultSetHasNoEdgeTerms)
{
    auto m = validated(dyadic_spec(true, true));
    std::vector<double> T{0.25, 0.5, kInfinity, kInfinity};
    auto L = build_ladder(m, DebtorSet{2, 3});
    auto node = L.index_of(DebtorSet{0, 1}, DebtorSet{0, 1});
    ASSERT_NE(node, kNoNode);
    auto terms = drift_terms(m, L, node, 0.75, T);
    ASSERT_EQ(terms.size(), 1u);
    EXPECT_EQ(terms[0].src, node);
    // -lambda(C) - sum over past D of pending B-impacts
    double expect = 0;
    for (std::size_t i : {2, 3})
    {
        expect -= m.alpha(i)(0.75) + m.gamma(i)(0.75) * m.hazard(i).g(0.75);
        for (std::size_t j : {0, 1})
        {
            expect -= m.phiB(i, j)(0.75);
        }
    }
    EXPECT_NEAR(terms[0].coeff, expect, 1e-15);
}

TEST(JumpTerms, EnvironmentEventCouplesPastDefaults)
{
    auto m = validated(dyadic_spec(true, true));
    auto L = build_ladder(m, DebtorSet{3});
    std::vector<TaggedTerm> out;
    auto node = L.index_of(DebtorSet{0, 1, 2}, DebtorSet{0});
    append_jump_terms(m, L, node, 2, 0.6, DebtorSet{0, 1}, out);
    std::map<std::size_t, double> got;
    for (auto const& t : out)
    {
        got[t.src] += t.coeff;
    }
    std::map<std::size_t, double> expect{
        {node, m.phiB(2, 0)(0.6) / m.gamma(2)(0.6)},
        {L.index_of(DebtorSet{0, 1, 2}, DebtorSet{0, 1}), m.p0(1) * m.phiB(2, 1)(0.6) / m.gamma(2)(0.6)}};
    EXPECT_EQ(got, expect);
}

TEST(EnvironmentWeight, BeforeAndAfterEvent)
{
    auto m = overspill::test::single_name();
    double G = [](double t) { return 0.5 * 0.2 * std::expm1(0.1 * t) / 0.1; }(0.4);
    EXPECT_NEAR(environment_weight(m, 0, 0.4, kInfinity), std::exp(G), 1e-15);
    EXPECT_NEAR(environment_weight(m, 0, 0.9, 0.4), std::exp(G) * (1 - 0.2 * std::exp(0.04)), 1e-15);
}
