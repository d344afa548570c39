//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/unit/test_ladder_solver.cpp
//---------------------------------------------------------------------------//
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "overspill/overspill.hpp"
#include "support/conditional_fk.hpp"
#include "support/models.hpp"

using namespace overspill;
using overspill::test::ConditionalFK;

namespace
{
std::vector<FPath> environment_paths(ValidatedModel const& model, std::size_t count, std::uint64_t seed)
{
    std::vector<FPath> out;
    for (std::size_t p = 0; p < count; ++p)
    {
        out.push_back(simulate_fbar_path(model, model.all(), PathKey{seed, p}));
    }
    return out;
}

ModelSpec strong_three_name()
{
    return overspill::test::constant_spec({0.1, 0.15, 0.2},
                                          {0.5, 0.9, 0.7},
                                          {0.2, 0.4, 0.3},
                                          {{0, 1.2, 0.4}, {0.8, 0, 1.5}, {0.3, 1.1, 0}},
                                          {{0, 0.6, 0.2}, {0.9, 0, 0.5}, {0.4, 0.7, 0}},
                                          2.0);
}
}  // namespace

//---------------------------------------------------------------------------//
TEST(IntegrateLadder, MatchesConditionalExpectationOnEnvironmentPaths)
{
    auto model = validated(strong_three_name());
    double const t = 1.5;
    for (auto const& f : environment_paths(model, 6, 31))
    {
        for (auto C : {DebtorSet{0}, DebtorSet{2}, DebtorSet{0, 1}})
        {
            auto ladder = build_ladder(model, C);
            auto values = integrate_ladder(model, ladder, f, {t}, LadderOptions{1e-11, 1e-9});
            for (std::size_t i = 0; i < ladder.size(); ++i)
            {
                auto const& node = ladder[i];
                if (node.S != ladder.S_star())
                {
                    continue;
                }
                double fk = ConditionalFK(model, C, node.D, f)(t);
                EXPECT_NEAR(values.at(i, 0), fk, 1e-7) << C.to_string() << " D=" << node.D.to_string();
            }
        }
    }
}

TEST(IntegrateLadder, UnweightedFormDeviatesWhenEnvironmentDefaultsMatter)
{
    auto model = validated(strong_three_name());
    double const t = 1.5;
    double worst = 0;
    for (auto const& f : environment_paths(model, 6, 31))
    {
        auto C = DebtorSet{0};
        auto ladder = build_ladder(model, C);
        LadderOptions opt{1e-10, 1e-8, DriftForm::UnweightedSubset};
        auto values = integrate_ladder(model, ladder, f, {t}, opt);
        double fk = ConditionalFK(model, C, {}, f)(t);
        worst = std::max(worst, std::abs(values.at(ladder.top(), 0) - fk));
    }
    EXPECT_GT(worst, 1e-3);
}

TEST(IntegrateLadder, PiecewiseCoefficients)
{
    auto spec = strong_three_name();
    spec.alpha[1] = PiecewiseConstant({0.0, 0.6}, {0.15, 0.35});
    spec.phiA[0][2] = PiecewiseConstant({0.0, 1.1}, {0.4, 0.0});
    spec.phiB[2][1] = PiecewiseConstant({0.0, 0.3}, {0.7, 0.2});
    auto model = validated(spec);
    for (auto const& f : environment_paths(model, 4, 77))
    {
        auto C = DebtorSet{2};
        auto ladder = build_ladder(model, C);
        auto values = integrate_ladder(model, ladder, f, {0.4, 1.7}, LadderOptions{1e-11, 1e-9});
        EXPECT_NEAR(values.at(ladder.top(), 0), ConditionalFK(model, C, {}, f)(0.4), 1e-7);
        EXPECT_NEAR(values.at(ladder.top(), 1), ConditionalFK(model, C, {}, f)(1.7), 1e-7);
    }
}

TEST(IntegrateLadder, ValuesStartAtOneAndStayNonnegative)
{
    auto model = overspill::test::four_name();
    for (auto const& f : environment_paths(model, 10, 5))
    {
        auto ladder = build_ladder(model, DebtorSet{3});
        auto values = integrate_ladder(model, ladder, f, {0.0, 1.0, 2.0});
        for (std::size_t i = 0; i < ladder.size(); ++i)
        {
            EXPECT_DOUBLE_EQ(values.at(i, 0), 1.0);
            EXPECT_GE(values.at(i, 2), 0.0);
        }
        EXPECT_GE(values.min_value, -1e-7);
    }
}

//---------------------------------------------------------------------------//
TEST(SurvivalViaTheorem, EmptyTargetIsExactlyOne)
{
    auto model = overspill::test::four_name();
    auto est = survival_via_theorem(model, DebtorSet{}, 1.0, 1000, 3);
    EXPECT_EQ(est.mean, 1.0);
    EXPECT_EQ(est.std_error, 0.0);
}

TEST(SurvivalViaTheorem, DeterministicWithoutSystemicDebtors)
{
    auto model = validated(overspill::test::random_markov_spec(4));
    auto est = survival_via_theorem(model, DebtorSet{1, 3}, 1.0, 1000, 3);
    EXPECT_EQ(est.std_error, 0.0);
    EXPECT_NEAR(est.mean, markov_joint_survival(model, DebtorSet{1, 3}, 1.0), 1e-7);
}

TEST(SurvivalViaTheorem, SingleNameAgreesWithClosedForm)
{
    auto model = overspill::test::single_name();
    auto est = survival_via_theorem(model, DebtorSet{0}, 1.0, 20000, 8);
    EXPECT_NEAR(est.mean, 0.830260728455128, 3 * est.std_error + 1e-9);
}

TEST(SurvivalViaTheorem, ThreadCountDoesNotChangeResult)
{
    auto model = overspill::test::four_name();
    auto a = survival_via_theorem(model, DebtorSet{0, 2}, 1.0, 500, 12, {}, 1);
    auto b = survival_via_theorem(model, DebtorSet{0, 2}, 1.0, 500, 12, {}, 3);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(SurvivalViaTheorem, TooFewPathsRejected)
{
    auto model = overspill::test::four_name();
    EXPECT_THROW(survival_via_theorem(model, DebtorSet{0}, 1.0, 10, 1), std::invalid_argument);
}

//---------------------------------------------------------------------------//
TEST(LPathwise, MeanMatchesLadderValue)
{
    auto model = validated(strong_three_name());
    auto C = DebtorSet{0};
    for (auto D : {DebtorSet{}, DebtorSet{1}, DebtorSet{2}})
    {
        double const t = 1.2;
        auto ladder = build_ladder(model, C);
        auto f = simulate_fbar_path(model, model.all(), PathKey{90, 0});
        double fk = ConditionalFK(model, C, D, f)(t);
        // defaults of N - C drawn under the adjusted measure given the fixed path
        std::vector<double> xs;
        for (std::size_t p = 0; p < 40000; ++p)
        {
            auto path = with_threshold_defaults(model, f, model.all() - C, PathKey{91, p});
            xs.push_back(L_pathwise(model, C, D, path, t));
        }
        auto est = EstimateCI::from_samples(xs);
        auto node = ladder.index_of(ladder.S_star(), D);
        auto values = integrate_ladder(model, ladder, f, {t});
        EXPECT_NEAR(values.at(node, 0), fk, 1e-6);
        EXPECT_NEAR(est.mean, fk, 4 * est.std_error) << D.to_string();
    }
}

//---------------------------------------------------------------------------//
TEST(JointB, NonSystemicDefaultSetIsImpossible)
{
    auto model = overspill::test::four_name();
    auto r = joint_b_default_via_theorem(model, DebtorSet{0}, DebtorSet{3}, 1.0, 200, 1);
    EXPECT_TRUE(r.invalid_D);
    EXPECT_EQ(r.estimate.mean, 0.0);
    EXPECT_FALSE(r.note.empty());
}

TEST(JointB, OverlappingSetsRejected)
{
    auto model = overspill::test::four_name();
    EXPECT_THROW(joint_b_default_via_theorem(model, DebtorSet{0}, DebtorSet{0}, 1.0, 200, 1),
                 std::invalid_argument);
}

TEST(NegativeValue, ReportsNodeAndTime)
{
    NegativeValue e(3, 0.5, -1e-3);
    EXPECT_EQ(e.node(), 3u);
    EXPECT_EQ(e.time(), 0.5);
}
