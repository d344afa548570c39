//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/weights.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "debtor_set.hpp"
#include "model.hpp"
#include "path.hpp"

namespace overspill
{
//---------------------------------------------------------------------------//
/*!
 * Density of the contagion measure for C against the baseline, evaluated
 * pathwise at time t.
 *
 * Per debtor i the A factor is exp(-int_0^{t ^ tau(i)} alpha A) times
 * (1 + A) at tau^A(i), and the B factor is exp(-int_0^{t ^ T(i)} gamma B)
 * times (1 + B) at T(i), where alpha A(i) and gamma B(i) sum the impacts of
 * contagious debtors that defaulted through the matching channel.
 */
inline double girsanov_weight(ValidatedModel const& model,
                              DebtorSet C,
                              SystemPath const& path,
                              double t)
{
    std::size_t const n = model.n();
    double log_w = 0;
    double jumps = 1;
    for (std::size_t i = 0; i < n; ++i)
    {
        double endA = std::min(t, path.tau(i));
        double endB = std::min(t, path.T(i));
        double sA = path.tauA(i);
        double sB = path.T(i);
        double impactA = 0;
        double impactB = 0;
        C.for_each([&](std::size_t j) {
            double uA = path.tauA(j);
            if (uA < endA)
            {
                log_w -= model.phiA(i, j).integral(uA, endA);
            }
            if (sA <= t && uA < sA)
            {
                impactA += model.phiA(i, j)(sA);
            }
            double uB = path.tauB(j);
            if (uB < endB)
            {
                log_w -= model.phiB(i, j).integral(uB, endB);
            }
            if (sB <= t && uB < sB)
            {
                impactB += model.phiB(i, j)(sB);
            }
        });
        if (sA <= t)
        {
            jumps *= 1 + impactA / model.alpha(i)(sA);
        }
        if (sB <= t)
        {
            jumps *= 1 + impactB / model.gamma(i)(sB);
        }
    }
    return jumps * std::exp(log_w);
}

//---------------------------------------------------------------------------//
/*!
 * Density of the default-adjusted measure for C against the baseline:
 * product over k in C of exp(int_0^{t ^ T(k)} gamma g) (1 - g_{T(k)}) when
 * T(k) <= t.
 */
inline double pbar_weight(ValidatedModel const& model,
                          DebtorSet C,
                          FPath const& f,
                          double t)
{
    double log_w = 0;
    double jumps = 1;
    C.for_each([&](std::size_t k) {
        auto const& h = model.hazard(k);
        double T = f.T(k);
        log_w += h.gamma_g_integral(std::min(t, T));
        if (T <= t)
        {
            jumps *= 1 - h.g(T);
        }
    });
    return jumps * std::exp(log_w);
}

//---------------------------------------------------------------------------//
//! Compensated A-default indicator of debtor k.
inline double m_martingale(ValidatedModel const& model,
                           SystemPath const& path,
                           std::size_t k,
                           double t)
{
    double jump = path.tauA(k) <= t ? 1.0 : 0.0;
    return jump - model.alpha(k).integral(std::min(t, path.tau(k)));
}

//! Compensated environment-event indicator of debtor k.
inline double
n_martingale(ValidatedModel const& model, FPath const& f, std::size_t k, double t)
{
    double jump = f.T(k) <= t ? 1.0 : 0.0;
    return jump - model.gamma(k).integral(std::min(t, f.T(k)));
}

//---------------------------------------------------------------------------//
}  // namespace overspill
