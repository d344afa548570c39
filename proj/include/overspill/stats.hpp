//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/stats.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace overspill
{
//---------------------------------------------------------------------------//
/*!
 * Pairwise (cascade) summation.
 *
 * The split points depend only on the length, so the result is a fixed
 * function of the input sequence.
 */
inline double pairwise_sum(std::span<double const> x)
{
    if (x.size() <= 16)
    {
        double s = 0;
        for (double v : x)
        {
            s += v;
        }
        return s;
    }
    std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

//---------------------------------------------------------------------------//
//! Monte Carlo estimate or exact value with its 95% interval.
struct EstimateCI
{
    double mean = 0;
    double std_error = 0;
    std::size_t n_paths = 0;
    double ci_lo = 0;
    double ci_hi = 0;

    bool is_exact() const { return n_paths == 0; }

    static EstimateCI exact(double value)
    {
        return {value, 0.0, 0, value, value};
    }

    static EstimateCI from_moments(double mean, double se, std::size_t n)
    {
        return {mean, se, n, mean - 1.96 * se, mean + 1.96 * se};
    }

    //! Sample mean and standard error (unbiased variance) of the samples.
    static EstimateCI from_samples(std::span<double const> x)
    {
        if (x.empty())
        {
            throw std::invalid_argument("EstimateCI: no samples");
        }
        double const n = static_cast<double>(x.size());
        double mean = pairwise_sum(x) / n;
        double se = 0;
        if (x.size() > 1)
        {
            std::vector<double> sq(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                double d = x[i] - mean;
                sq[i] = d * d;
            }
            se = std::sqrt(pairwise_sum(sq) / (n - 1) / n);
        }
        return from_moments(mean, se, x.size());
    }
};

//---------------------------------------------------------------------------//
enum class VerdictMode
{
    Sigma,     //!< |diff| <= threshold * combined standard error
    Absolute,  //!< |diff| <= threshold
};

struct ComparisonVerdict
{
    EstimateCI lhs;
    EstimateCI rhs;
    double diff = 0;
    double z_score = 0;
    double threshold = 3.0;
    VerdictMode mode = VerdictMode::Sigma;
    bool pass = false;
};

inline double combined_se(EstimateCI const& a, EstimateCI const& b)
{
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

/*!
 * Statistical comparison: pass iff the difference of means is within
 * threshold combined standard errors.
 */
inline ComparisonVerdict compare_estimates(EstimateCI const& lhs,
                                           EstimateCI const& rhs,
                                           double threshold = 3.0)
{
    ComparisonVerdict v{lhs, rhs};
    v.threshold = threshold;
    v.diff = lhs.mean - rhs.mean;
    double se = combined_se(lhs, rhs);
    if (se > 0)
    {
        v.z_score = v.diff / se;
    }
    else
    {
        v.z_score = v.diff == 0 ? 0.0 : std::copysign(
                        std::numeric_limits<double>::infinity(), v.diff);
    }
    v.pass = std::abs(v.diff) <= threshold * se;
    return v;
}

//! Deterministic comparison against an absolute tolerance.
inline ComparisonVerdict
compare_exact(double lhs, double rhs, double tolerance = 1e-6)
{
    ComparisonVerdict v{EstimateCI::exact(lhs), EstimateCI::exact(rhs)};
    v.mode = VerdictMode::Absolute;
    v.threshold = tolerance;
    v.diff = lhs - rhs;
    v.pass = std::abs(v.diff) <= tolerance;
    return v;
}

//---------------------------------------------------------------------------//
}  // namespace overspill
