//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/path.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "piecewise.hpp"

namespace overspill
{
//---------------------------------------------------------------------------//
enum class EventKind
{
    ADefault,
    TEvent,
};

struct SystemEvent
{
    double time;
    EventKind kind;
    std::size_t debtor;
    bool defaulted = false;  //!< for TEvent: the debtor defaulted at T

    //! Simulation order: time, then A before T, then debtor index.
    friend bool operator<(SystemEvent const& a, SystemEvent const& b)
    {
        return std::tuple(a.time, a.kind, a.debtor)
               < std::tuple(b.time, b.kind, b.debtor);
    }
    friend bool operator==(SystemEvent const&, SystemEvent const&) = default;
};

//---------------------------------------------------------------------------//
/*!
 * Environment-only trajectory: one event time per debtor, infinity when the
 * event falls beyond the horizon.
 */
struct FPath
{
    std::vector<double> T_times;

    std::size_t size() const { return T_times.size(); }
    double T(std::size_t k) const { return T_times[k]; }
};

//---------------------------------------------------------------------------//
/*!
 * Event log of one simulated trajectory with per-debtor accessors.
 *
 * Absent events read as infinity (censored at the horizon).
 */
class SystemPath
{
  public:
    SystemPath() = default;
    explicit SystemPath(std::size_t n)
        : tauA_(n, kInfinity), tauB_(n, kInfinity), T_(n, kInfinity)
    {
    }

    std::size_t n() const { return T_.size(); }

    //! Append an event; events must arrive in simulation order.
    void record(SystemEvent const& e)
    {
        if (e.debtor >= this->n())
        {
            throw std::out_of_range("SystemPath: debtor out of range");
        }
        if (!events_.empty() && e < events_.back())
        {
            throw std::logic_error("SystemPath: events out of order");
        }
        if (e.kind == EventKind::ADefault)
        {
            if (this->tau(e.debtor) != kInfinity)
            {
                throw std::logic_error("SystemPath: debtor defaults twice");
            }
            tauA_[e.debtor] = e.time;
        }
        else
        {
            if (T_[e.debtor] != kInfinity)
            {
                throw std::logic_error("SystemPath: repeated environment event");
            }
            if (e.defaulted && this->tau(e.debtor) != kInfinity)
            {
                throw std::logic_error("SystemPath: default mark on a dead debtor");
            }
            T_[e.debtor] = e.time;
            if (e.defaulted)
            {
                tauB_[e.debtor] = e.time;
            }
        }
        events_.push_back(e);
    }

    std::vector<SystemEvent> const& events() const { return events_; }
    double tauA(std::size_t k) const { return tauA_[k]; }
    double tauB(std::size_t k) const { return tauB_[k]; }
    double tau(std::size_t k) const { return std::min(tauA_[k], tauB_[k]); }
    double T(std::size_t k) const { return T_[k]; }

    bool survives(std::size_t k, double t) const { return this->tau(k) > t; }

    //! Thresholds e(k), present only for paths built from them.
    std::vector<double> const& thresholds() const { return thresholds_; }
    void set_thresholds(std::vector<double> e) { thresholds_ = std::move(e); }

    FPath environment() const { return FPath{T_}; }

  private:
    std::vector<SystemEvent> events_;
    std::vector<double> tauA_;
    std::vector<double> tauB_;
    std::vector<double> T_;
    std::vector<double> thresholds_;
};

//---------------------------------------------------------------------------//
/*!
 * Write paths as CSV rows (path_id, time, event_kind, debtor, defaulted).
 */
inline void write_paths_csv(std::ostream& os,
                            std::span<SystemPath const> paths,
                            std::size_t first_id = 0)
{
    os << "path_id,time,event_kind,debtor,defaulted\n";
    auto precision = os.precision(17);
    for (std::size_t p = 0; p < paths.size(); ++p)
    {
        for (auto const& e : paths[p].events())
        {
            os << first_id + p << ',' << e.time << ','
               << (e.kind == EventKind::ADefault ? "A" : "T") << ','
               << e.debtor << ',' << (e.defaulted ? 1 : 0) << '\n';
        }
    }
    os.precision(precision);
}

//---------------------------------------------------------------------------//
}  // namespace overspill
