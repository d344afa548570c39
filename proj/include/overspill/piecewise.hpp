//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/piecewise.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace overspill
{
//---------------------------------------------------------------------------//
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

//---------------------------------------------------------------------------//
/*!
 * Right-continuous piecewise-constant function of time on [0, inf).
 *
 * Segment \c i covers [breaks[i], breaks[i+1]) and the last segment extends
 * to infinity. Construction accepts any data so that model validation can
 * report every defect; \c defect() describes the first structural problem.
 * All other member functions assume a defect-free function.
 */
class PiecewiseConstant
{
  public:
    PiecewiseConstant() : PiecewiseConstant(0.0) {}

    explicit PiecewiseConstant(double value) : breaks_{0.0}, values_{value}
    {
        this->build_cumulative();
    }

    PiecewiseConstant(std::vector<double> breaks, std::vector<double> values)
        : breaks_(std::move(breaks)), values_(std::move(values))
    {
        if (!this->defect())
        {
            this->build_cumulative();
        }
    }

    //! First structural problem, if any.
    std::optional<std::string> defect() const
    {
        if (breaks_.empty() || breaks_.size() != values_.size())
        {
            return "breaks and values must be non-empty and of equal length";
        }
        if (breaks_.front() != 0.0)
        {
            return "first breakpoint must be 0";
        }
        for (std::size_t i = 1; i < breaks_.size(); ++i)
        {
            if (!(breaks_[i] > breaks_[i - 1]) || !std::isfinite(breaks_[i]))
            {
                return "breakpoints must be finite and strictly increasing "
                       "(index "
                       + std::to_string(i) + ")";
            }
        }
        for (std::size_t i = 0; i < values_.size(); ++i)
        {
            if (!std::isfinite(values_[i]) || values_[i] < 0)
            {
                return "segment " + std::to_string(i)
                       + " value must be finite and nonnegative";
            }
        }
        return std::nullopt;
    }

    std::vector<double> const& breaks() const { return breaks_; }
    std::vector<double> const& values() const { return values_; }
    std::size_t num_segments() const { return values_.size(); }
    bool is_constant() const { return values_.size() == 1; }

    //! Index of the segment containing t (t >= 0).
    std::size_t segment(double t) const
    {
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        return it == breaks_.begin()
                   ? 0
                   : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    }

    double operator()(double t) const { return values_[this->segment(t)]; }

    //! Exact integral over [0, t].
    double integral(double t) const
    {
        if (t <= 0)
        {
            return 0;
        }
        auto i = this->segment(t);
        return cumulative_[i] + values_[i] * (t - breaks_[i]);
    }

    //! Exact integral over [a, b].
    double integral(double a, double b) const
    {
        return this->integral(b) - this->integral(a);
    }

    //! Smallest t with integral(t) >= y; infinity if never reached.
    double inverse_integral(double y) const
    {
        if (y <= 0)
        {
            return 0;
        }
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), y);
        auto i = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
        if (values_[i] == 0)
        {
            return kInfinity;
        }
        double t = breaks_[i] + (y - cumulative_[i]) / values_[i];
        if (i + 1 < breaks_.size())
        {
            t = std::min(t, breaks_[i + 1]);
        }
        return t;
    }

    //! Smallest breakpoint strictly greater than t, or infinity.
    double next_break(double t) const
    {
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        return it == breaks_.end() ? kInfinity : *it;
    }

    //! Supremum of the function over [0, horizon).
    double max_on(double horizon) const
    {
        double result = 0;
        for (std::size_t i = 0; i < values_.size() && breaks_[i] < horizon;
             ++i)
        {
            result = std::max(result, values_[i]);
        }
        return result;
    }

    //! Infimum of the function over [0, horizon).
    double min_on(double horizon) const
    {
        double result = kInfinity;
        for (std::size_t i = 0; i < values_.size() && breaks_[i] < horizon;
             ++i)
        {
            result = std::min(result, values_[i]);
        }
        return result;
    }

    bool is_zero() const
    {
        return std::all_of(
            values_.begin(), values_.end(), [](double v) { return v == 0; });
    }

    friend bool
    operator==(PiecewiseConstant const& a, PiecewiseConstant const& b)
    {
        return a.breaks_ == b.breaks_ && a.values_ == b.values_;
    }

  private:
    std::vector<double> breaks_;
    std::vector<double> values_;
    std::vector<double> cumulative_;  // integral up to breaks_[i]

    void build_cumulative()
    {
        cumulative_.assign(breaks_.size(), 0.0);
        for (std::size_t i = 1; i < breaks_.size(); ++i)
        {
            cumulative_[i] = cumulative_[i - 1]
                             + values_[i - 1] * (breaks_[i] - breaks_[i - 1]);
        }
    }
};

//---------------------------------------------------------------------------//
/*!
 * Exact integral of a piecewise-constant coefficient over [0, t].
 */
inline double coeff_integral(PiecewiseConstant const& f, double t)
{
    if (!(t >= 0) || !std::isfinite(t))
    {
        throw std::out_of_range("coeff_integral: time must be finite and >= 0");
    }
    return f.integral(t);
}

//---------------------------------------------------------------------------//
//! (exp(x h) - 1) / x, continuous at x = 0.
inline double expm1_ratio(double x, double h)
{
    return x == 0 ? h : std::expm1(x * h) / x;
}

//---------------------------------------------------------------------------//
}  // namespace overspill
