//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file tests/unit/test_model.cpp
//---------------------------------------------------------------------------//
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "overspill/model.hpp"
#include "support/models.hpp"

using namespace overspill;
using overspill::test::constant_spec;

namespace
{
bool has_violation(ValidationResult const& r, ViolationKind kind, int debtor = -1)
{
    for (auto const& v : r.violations)
    {
        if (v.kind == kind && (debtor < 0 || v.debtor == debtor))
        {
            return true;
        }
    }
    return false;
}
}  // namespace

//---------------------------------------------------------------------------//
TEST(ValidateSpec, NonSystemicSingleName)
{
    EXPECT_TRUE(validate_spec(constant_spec({0.1}, {0.5}, {0.0}, {}, {}, 5.0)).ok());
}

TEST(ValidateSpec, CapSatisfied)
{
    EXPECT_TRUE(validate_spec(constant_spec({0.1}, {0.5}, {0.2}, {}, {}, 1.0)).ok());
}

TEST(ValidateSpec, CapViolated)
{
    auto r = validate_spec(constant_spec({0.5}, {0.5}, {0.9}, {}, {}, 1.0));
    ASSERT_FALSE(r.ok());
    EXPECT_TRUE(has_violation(r, ViolationKind::CapViolation, 0));
    EXPECT_FALSE(r.model.has_value());
}

TEST(ValidateSpec, ReportsEveryViolationWithLocation)
{
    auto spec = constant_spec({0.1, 0.2}, {0.5, 0.5}, {0.0, 1.0}, {{0.3, 0.1}, {0.0, 0.0}}, {}, 1.0);
    spec.alpha[1] = PiecewiseConstant({0.0, 0.5}, {0.2, 0.0});
    spec.gamma[0] = PiecewiseConstant({0.0, 0.5, 0.4}, {0.5, 0.5, 0.5});
    auto r = validate_spec(spec);
    ASSERT_FALSE(r.ok());
    EXPECT_TRUE(has_violation(r, ViolationKind::DiagonalImpact, 0));
    EXPECT_TRUE(has_violation(r, ViolationKind::BadProbability, 1));
    EXPECT_TRUE(has_violation(r, ViolationKind::BadBreakpoints, 0));
    EXPECT_TRUE(has_violation(r, ViolationKind::NonPositiveBaseline, 1));
    for (auto const& v : r.violations)
    {
        if (v.kind == ViolationKind::NonPositiveBaseline)
        {
            EXPECT_EQ(v.segment, 1);
            EXPECT_EQ(v.field, "debtors[1].alpha");
        }
    }
}

TEST(ValidateSpec, ZeroRateAfterHorizonIsAllowed)
{
    auto spec = constant_spec({0.1}, {0.5}, {0.0}, {}, {}, 1.0);
    spec.alpha[0] = PiecewiseConstant({0.0, 1.0}, {0.1, 0.0});
    EXPECT_TRUE(validate_spec(spec).ok());
}

TEST(ValidateSpec, Dimensions)
{
    auto spec = constant_spec({0.1, 0.2}, {0.5, 0.5}, {0.0, 0.0}, {}, {}, 1.0);
    spec.phiA.pop_back();
    EXPECT_TRUE(has_violation(validate_spec(spec), ViolationKind::BadDimensions));
    ModelSpec empty;
    EXPECT_TRUE(has_violation(validate_spec(empty), ViolationKind::BadDimensions));
}

TEST(ValidateSpec, ValidatedThrowsWithViolations)
{
    try
    {
        validated(constant_spec({0.5}, {0.5}, {0.9}, {}, {}, 1.0));
        FAIL() << "expected ModelError";
    }
    catch (ModelError const& e)
    {
        ASSERT_EQ(e.violations().size(), 1u);
        EXPECT_EQ(e.violations()[0].kind, ViolationKind::CapViolation);
    }
}

//---------------------------------------------------------------------------//
TEST(GValue, Examples)
{
    auto m = validated(constant_spec({0.1, 0.1}, {0.5, 0.5}, {0.2, 0.0}, {}, {}, 1.0));
    EXPECT_EQ(g_value(m, 1, 0.7), 0.0);
    EXPECT_NEAR(g_value(m, 0, 1.0), 0.22103418361512954, 1e-15);
    EXPECT_DOUBLE_EQ(g_value(m, 0, 0.0), 0.2);
    EXPECT_THROW(g_value(m, 0, 1.5), std::out_of_range);
}

TEST(GValue, MonotoneAndCapped)
{
    auto spec = constant_spec({0.1}, {0.5}, {0.4}, {}, {}, 3.0);
    spec.alpha[0] = PiecewiseConstant({0.0, 1.0, 2.0}, {0.3, 0.01, 0.2});
    auto m = validated(spec);
    double prev = 0;
    for (int i = 0; i <= 300; ++i)
    {
        double g = g_value(m, 0, i / 100.0);
        EXPECT_GE(g, prev);
        EXPECT_LE(g, 1 - m.epsilon_g());
        prev = g;
    }
}

TEST(HazardJump, Examples)
{
    auto m = validated(constant_spec({0.1, 0.1, 0.1}, {0.5, 0.5, 0.5}, {0.2, 0.0, 0.5}, {}, {}, 1.0));
    EXPECT_EQ(hazard_jump(m, 1, 0.5), 0.0);
    EXPECT_NEAR(hazard_jump(m, 2, 0.0), std::log(2.0), 1e-15);
    EXPECT_NEAR(hazard_jump(m, 0, 1.0), 0.24978811548002040, 1e-14);
    EXPECT_GT(hazard_jump(m, 0, 0.3), 0.0);
}

TEST(BaseIntensities, Examples)
{
    auto m = validated(constant_spec({0.1, 0.1}, {0.5, 0.5}, {0.2, 0.0}, {}, {}, 1.0));
    auto a = base_intensities(m, 0, 0.0, false);
    EXPECT_DOUBLE_EQ(a.lambda, 0.2);
    EXPECT_DOUBLE_EQ(a.beta, 0.1);
    auto b = base_intensities(m, 0, 1.0, false);
    EXPECT_NEAR(b.lambda, 0.21051709180756477, 1e-15);
    EXPECT_NEAR(b.beta, 0.11051709180756477, 1e-15);
    auto c = base_intensities(m, 0, 1.0, true);
    EXPECT_EQ(c.lambda, 0.1);
    EXPECT_EQ(c.beta, 0.0);
    for (double t : {0.0, 0.3, 0.9})
    {
        auto d = base_intensities(m, 1, t, false);
        EXPECT_EQ(d.lambda, 0.1);
        EXPECT_EQ(d.beta, 0.0);
        auto e = base_intensities(m, 0, t, false);
        EXPECT_EQ(e.lambda, 0.1 + e.beta);
    }
}

TEST(PsiA, Examples)
{
    auto m = validated(constant_spec({0.1, 0.1, 0.1},
                                     {0.5, 0.5, 0.5},
                                     {0.0, 0.0, 0.0},
                                     {{0, 0.1, 0.3}, {0.2, 0, 0.4}, {0.1, 0.1, 0}},
                                     {},
                                     1.0));
    std::vector<double> pending{kInfinity, kInfinity, kInfinity};
    std::vector<double> past{kInfinity, 0.2, kInfinity};
    EXPECT_NEAR(psi_A(m, DebtorSet{0}, DebtorSet{1}, 2, 0.5, pending), 0.7, 1e-15);
    EXPECT_NEAR(psi_A(m, DebtorSet{0}, DebtorSet{1}, 2, 0.5, past), 0.3, 1e-15);
    EXPECT_NEAR(psi_A(m, DebtorSet{0, 1}, DebtorSet{}, 2, 0.5, past), 0.7, 1e-15);
    EXPECT_LE(psi_A(m, DebtorSet{}, DebtorSet{0, 1}, 2, 0.5, past),
              psi_A(m, DebtorSet{}, DebtorSet{0, 1}, 2, 0.5, pending));
    EXPECT_THROW(psi_A(m, DebtorSet{0}, DebtorSet{0}, 2, 0.5, pending), std::invalid_argument);
}

TEST(ValidatedModel, KnotsAndSystemicSet)
{
    auto spec = overspill::test::four_name_spec();
    spec.phiA[0][1] = PiecewiseConstant({0.0, 0.5, 3.0}, {0.3, 0.1, 0.2});
    auto m = validated(spec);
    EXPECT_EQ(m.systemic_set(), (DebtorSet{0, 1}));
    EXPECT_EQ(m.knots(), std::vector<double>{0.5});
    EXPECT_EQ(m.next_knot(0.1), 0.5);
    EXPECT_EQ(m.next_knot(0.5), kInfinity);
    EXPECT_FALSE(m.contagion_free());
}
