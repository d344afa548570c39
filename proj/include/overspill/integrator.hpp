//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/integrator.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace overspill
{
//---------------------------------------------------------------------------//
//! Adaptive step control could not meet the requested tolerance.
class StepFailure : public std::runtime_error
{
  public:
    StepFailure(std::string const& what, double time)
        : std::runtime_error(what + " at t = " + std::to_string(time)), time_(time)
    {
    }
    double time() const { return time_; }

  private:
    double time_;
};

struct DopriOptions
{
    double rtol = 1e-8;
    double atol = 1e-8;
    std::size_t max_steps = 1000000;
};

struct DopriStats
{
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

//---------------------------------------------------------------------------//
/*!
 * Dormand-Prince 5(4) integrator for y' = f(t, y) on a smooth interval.
 *
 * The step size \c h carries over between calls so that consecutive
 * intervals start from the last accepted step. \c on_step(t, y) runs after
 * every accepted step.
 */
class DormandPrince
{
  public:
    explicit DormandPrince(DopriOptions options = {}) : opt_(options) {}

    DopriOptions const& options() const { return opt_; }
    DopriStats const& stats() const { return stats_; }

    template<class F, class OnStep>
    void integrate(F&& f, double t0, double t1, std::vector<double>& y, OnStep&& on_step)
    {
        std::size_t const m = y.size();
        this->resize(m);
        double t = t0;
        if (!(t1 > t0))
        {
            return;
        }
        if (!(h_ > 0))
        {
            h_ = std::min(0.05, t1 - t0);
        }
        f(t, y, k_[0]);
        std::size_t steps = 0;
        while (t < t1)
        {
            if (++steps > opt_.max_steps)
            {
                throw StepFailure("integrator: step budget exhausted", t);
            }
            double h = std::min(h_, t1 - t);
            bool last = h >= t1 - t;
            if (!(h > 1e-14 * std::max(1.0, std::abs(t))))
            {
                throw StepFailure("integrator: step size underflow", t);
            }
            this->stage(f, t, h, y);
            double err = 0;
            for (std::size_t i = 0; i < m; ++i)
            {
                double sc = opt_.atol
                            + opt_.rtol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
                double e = err_[i] / sc;
                err += e * e;
            }
            err = m > 0 ? std::sqrt(err / static_cast<double>(m)) : 0.0;
            if (!std::isfinite(err))
            {
                throw StepFailure("integrator: non-finite state", t);
            }
            if (err <= 1)
            {
                t = last ? t1 : t + h;
                y.swap(ynew_);
                std::swap(k_[0], k_[6]);
                ++stats_.accepted;
                double factor = err == 0 ? 5.0 : 0.9 * std::pow(err, -0.2);
                h_ = h * std::clamp(factor, 0.2, 5.0);
                if (last)
                {
                    h_ = std::max(h_, h);
                }
                on_step(t, y);
            }
            else
            {
                ++stats_.rejected;
                h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
            }
        }
    }

  private:
    DopriOptions opt_;
    DopriStats stats_;
    double h_ = 0;
    std::vector<double> k_[7];
    std::vector<double> tmp_;
    std::vector<double> ynew_;
    std::vector<double> err_;

    void resize(std::size_t m)
    {
        for (auto& k : k_)
        {
            k.resize(m);
        }
        tmp_.resize(m);
        ynew_.resize(m);
        err_.resize(m);
    }

    template<class F>
    void stage(F&& f, double t, double h, std::vector<double> const& y)
    {
        std::size_t const m = y.size();
        auto combo = [&](std::initializer_list<double> a) {
            for (std::size_t i = 0; i < m; ++i)
            {
                double s = 0;
                std::size_t r = 0;
                for (double c : a)
                {
                    s += c * k_[r++][i];
                }
                tmp_[i] = y[i] + h * s;
            }
        };
        combo({1.0 / 5});
        f(t + h / 5, tmp_, k_[1]);
        combo({3.0 / 40, 9.0 / 40});
        f(t + 3 * h / 10, tmp_, k_[2]);
        combo({44.0 / 45, -56.0 / 15, 32.0 / 9});
        f(t + 4 * h / 5, tmp_, k_[3]);
        combo({19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729});
        f(t + 8 * h / 9, tmp_, k_[4]);
        combo({9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656});
        f(t + h, tmp_, k_[5]);
        for (std::size_t i = 0; i < m; ++i)
        {
            ynew_[i] = y[i]
                       + h
                             * (35.0 / 384 * k_[0][i] + 500.0 / 1113 * k_[2][i]
                                + 125.0 / 192 * k_[3][i] - 2187.0 / 6784 * k_[4][i]
                                + 11.0 / 84 * k_[5][i]);
        }
        f(t + h, ynew_, k_[6]);
        for (std::size_t i = 0; i < m; ++i)
        {
            err_[i] = h
                      * (71.0 / 57600 * k_[0][i] - 71.0 / 16695 * k_[2][i]
                         + 71.0 / 1920 * k_[3][i] - 17253.0 / 339200 * k_[4][i]
                         + 22.0 / 525 * k_[5][i] - 1.0 / 40 * k_[6][i]);
        }
    }
};

//---------------------------------------------------------------------------//
}  // namespace overspill
