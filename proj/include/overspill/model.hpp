//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/model.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "debtor_set.hpp"
#include "piecewise.hpp"

namespace overspill
{
//---------------------------------------------------------------------------//
/*!
 * Full parameterization of the default system.
 *
 * \c phiA[i][j] and \c phiB[i][j] are the impacts of debtor j's default on
 * debtor i (direct and environment channel respectively). \c p0[k] is the
 * constant probability that debtor k defaults at its environment event.
 */
struct ModelSpec
{
    std::size_t n = 0;
    double horizon = 1.0;
    double epsilon_g = 1e-6;
    std::vector<PiecewiseConstant> alpha;
    std::vector<PiecewiseConstant> gamma;
    std::vector<double> p0;
    std::vector<std::vector<PiecewiseConstant>> phiA;
    std::vector<std::vector<PiecewiseConstant>> phiB;
};

//---------------------------------------------------------------------------//
enum class ViolationKind
{
    BadDimensions,
    BadHorizon,
    BadBreakpoints,
    BadProbability,
    NonPositiveBaseline,
    DiagonalImpact,
    CapViolation,
};

inline char const* to_cstring(ViolationKind k)
{
    switch (k)
    {
        case ViolationKind::BadDimensions:
            return "BadDimensions";
        case ViolationKind::BadHorizon:
            return "BadHorizon";
        case ViolationKind::BadBreakpoints:
            return "BadBreakpoints";
        case ViolationKind::BadProbability:
            return "BadProbability";
        case ViolationKind::NonPositiveBaseline:
            return "NonPositiveBaseline";
        case ViolationKind::DiagonalImpact:
            return "DiagonalImpact";
        case ViolationKind::CapViolation:
            return "CapViolation";
    }
    return "Unknown";
}

//! One violated model invariant, located by field, debtor and segment.
struct Violation
{
    ViolationKind kind;
    std::string field;
    int debtor = -1;
    int segment = -1;
    std::string message;

    std::string describe() const
    {
        std::ostringstream os;
        os << to_cstring(kind) << " at " << field;
        if (segment >= 0)
        {
            os << " segment " << segment;
        }
        os << ": " << message;
        return os.str();
    }
};

//---------------------------------------------------------------------------//
//! Thrown when an unvalidated model is forced through validation.
class ModelError : public std::runtime_error
{
  public:
    explicit ModelError(std::vector<Violation> violations)
        : std::runtime_error(summarize(violations))
        , violations_(std::move(violations))
    {
    }

    std::vector<Violation> const& violations() const { return violations_; }

  private:
    std::vector<Violation> violations_;

    static std::string summarize(std::vector<Violation> const& v)
    {
        std::string result = "invalid model";
        for (auto const& item : v)
        {
            result += "\n  " + item.describe();
        }
        return result;
    }
};

//---------------------------------------------------------------------------//
/*!
 * Closed-form evaluation of g_t(k) = p0 exp(int_0^t alpha) and of
 * G_t(k) = int_0^t gamma g ds (the pre-environment-event branch).
 *
 * Intervals are the merged breakpoints of alpha and gamma, so both rates are
 * constant on each interval.
 */
class HazardProfile
{
  public:
    struct Interval
    {
        double start;
        double alpha;
        double gamma;
        double A;  //!< int_0^start alpha
        double G;  //!< int_0^start gamma g
    };

    HazardProfile() = default;

    HazardProfile(PiecewiseConstant const& alpha,
                  PiecewiseConstant const& gamma,
                  double p0)
        : p0_(p0)
    {
        std::vector<double> starts = alpha.breaks();
        starts.insert(
            starts.end(), gamma.breaks().begin(), gamma.breaks().end());
        std::sort(starts.begin(), starts.end());
        starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

        double A = 0;
        double G = 0;
        for (std::size_t i = 0; i < starts.size(); ++i)
        {
            Interval iv{starts[i], alpha(starts[i]), gamma(starts[i]), A, G};
            intervals_.push_back(iv);
            if (i + 1 < starts.size())
            {
                double h = starts[i + 1] - starts[i];
                G += iv.gamma * p0_ * std::exp(A) * expm1_ratio(iv.alpha, h);
                A += iv.alpha * h;
            }
        }
    }

    double p0() const { return p0_; }
    std::vector<Interval> const& intervals() const { return intervals_; }

    std::size_t interval(double t) const
    {
        auto it = std::upper_bound(
            intervals_.begin(),
            intervals_.end(),
            t,
            [](double x, Interval const& iv) { return x < iv.start; });
        return it == intervals_.begin()
                   ? 0
                   : static_cast<std::size_t>(it - intervals_.begin()) - 1;
    }

    double g(double t) const
    {
        auto const& iv = intervals_[this->interval(t)];
        return p0_ * std::exp(iv.A + iv.alpha * (t - iv.start));
    }

    //! int_0^t gamma_s g_s ds
    double gamma_g_integral(double t) const
    {
        if (p0_ == 0 || t <= 0)
        {
            return 0;
        }
        auto const& iv = intervals_[this->interval(t)];
        return iv.G
               + iv.gamma * p0_ * std::exp(iv.A)
                     * expm1_ratio(iv.alpha, t - iv.start);
    }

    //! int_a^b g_s f_s ds for a piecewise-constant weight f.
    double g_weighted_integral(PiecewiseConstant const& f, double a, double b) const
    {
        if (p0_ == 0 || !(b > a))
        {
            return 0;
        }
        double total = 0;
        double u = a;
        while (u < b)
        {
            auto const& iv = intervals_[this->interval(u)];
            double next_iv = this->interval(u) + 1 < intervals_.size()
                                 ? intervals_[this->interval(u) + 1].start
                                 : kInfinity;
            double v = std::min({b, next_iv, f.next_break(u)});
            double fu = f(u);
            if (fu != 0)
            {
                double Au = iv.A + iv.alpha * (u - iv.start);
                total += fu * p0_ * std::exp(Au) * expm1_ratio(iv.alpha, v - u);
            }
            u = v;
        }
        return total;
    }

  private:
    double p0_ = 0;
    std::vector<Interval> intervals_;
};

struct ValidationResult;
ValidationResult validate_spec(ModelSpec spec);

//---------------------------------------------------------------------------//
/*!
 * Immutable model that satisfies every invariant checked by validate_spec.
 */
class ValidatedModel
{
  public:
    ModelSpec const& spec() const { return spec_; }
    std::size_t n() const { return spec_.n; }
    double horizon() const { return spec_.horizon; }
    double epsilon_g() const { return spec_.epsilon_g; }

    PiecewiseConstant const& alpha(std::size_t k) const
    {
        return spec_.alpha[k];
    }
    PiecewiseConstant const& gamma(std::size_t k) const
    {
        return spec_.gamma[k];
    }
    PiecewiseConstant const& phiA(std::size_t i, std::size_t j) const
    {
        return spec_.phiA[i][j];
    }
    PiecewiseConstant const& phiB(std::size_t i, std::size_t j) const
    {
        return spec_.phiB[i][j];
    }
    double p0(std::size_t k) const { return spec_.p0[k]; }
    bool systemic(std::size_t k) const { return spec_.p0[k] > 0; }
    DebtorSet systemic_set() const { return systemic_; }
    DebtorSet all() const { return DebtorSet::all(spec_.n); }
    HazardProfile const& hazard(std::size_t k) const { return hazard_[k]; }

    //! Sorted breakpoints of every coefficient inside (0, horizon).
    std::vector<double> const& knots() const { return knots_; }

    //! Smallest coefficient breakpoint strictly after t (or infinity).
    double next_knot(double t) const
    {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        return it == knots_.end() ? kInfinity : *it;
    }

    //! True when both impact matrices vanish identically.
    bool contagion_free() const { return contagion_free_; }

  private:
    ModelSpec spec_;
    DebtorSet systemic_;
    std::vector<HazardProfile> hazard_;
    std::vector<double> knots_;
    bool contagion_free_ = true;

    explicit ValidatedModel(ModelSpec spec) : spec_(std::move(spec))
    {
        std::vector<double> knots;
        auto add = [&](PiecewiseConstant const& f) {
            for (double b : f.breaks())
            {
                if (b > 0 && b < spec_.horizon)
                {
                    knots.push_back(b);
                }
            }
        };
        for (std::size_t k = 0; k < spec_.n; ++k)
        {
            if (spec_.p0[k] > 0)
            {
                systemic_ = systemic_.with(k);
            }
            hazard_.emplace_back(spec_.alpha[k], spec_.gamma[k], spec_.p0[k]);
            add(spec_.alpha[k]);
            add(spec_.gamma[k]);
            for (std::size_t j = 0; j < spec_.n; ++j)
            {
                add(spec_.phiA[k][j]);
                add(spec_.phiB[k][j]);
                contagion_free_ = contagion_free_ && spec_.phiA[k][j].is_zero()
                                  && spec_.phiB[k][j].is_zero();
            }
        }
        std::sort(knots.begin(), knots.end());
        knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
        knots_ = std::move(knots);
    }

    friend ValidationResult validate_spec(ModelSpec spec);
};

//! Outcome of validation: a model handle or the full list of violations.
struct ValidationResult
{
    std::optional<ValidatedModel> model;
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

//---------------------------------------------------------------------------//
/*!
 * Check every model invariant and return a validated handle when all hold.
 */
inline ValidationResult validate_spec(ModelSpec spec)
{
    ValidationResult result;
    auto& out = result.violations;
    auto report = [&](ViolationKind kind,
                      std::string field,
                      int debtor,
                      int segment,
                      std::string message) {
        out.push_back({kind, std::move(field), debtor, segment, std::move(message)});
    };

    std::size_t const n = spec.n;
    if (n == 0 || n > kMaxDebtors)
    {
        report(ViolationKind::BadDimensions,
               "n",
               -1,
               -1,
               "debtor count must be in [1, " + std::to_string(kMaxDebtors)
                   + "]");
        return result;
    }
    auto check_square = [&](auto const& m, char const* name) {
        if (m.size() != n)
        {
            return false;
        }
        return std::all_of(
            m.begin(), m.end(), [&](auto const& row) { return row.size() == n; });
        (void)name;
    };
    if (spec.alpha.size() != n || spec.gamma.size() != n || spec.p0.size() != n
        || !check_square(spec.phiA, "phiA") || !check_square(spec.phiB, "phiB"))
    {
        report(ViolationKind::BadDimensions,
               "debtors",
               -1,
               -1,
               "alpha, gamma, p0 need n entries and phiA, phiB need n x n");
        return result;
    }
    if (!(spec.horizon > 0) || !std::isfinite(spec.horizon))
    {
        report(ViolationKind::BadHorizon,
               "horizon",
               -1,
               -1,
               "horizon must be finite and positive");
    }
    if (!(spec.epsilon_g > 0 && spec.epsilon_g < 1))
    {
        report(ViolationKind::BadHorizon,
               "epsilon_g",
               -1,
               -1,
               "epsilon_g must lie in (0, 1)");
    }

    auto check_pc = [&](PiecewiseConstant const& f,
                        std::string const& field,
                        int debtor) {
        if (auto d = f.defect())
        {
            report(ViolationKind::BadBreakpoints, field, debtor, -1, *d);
            return false;
        }
        return true;
    };
    auto positive_on_horizon = [&](PiecewiseConstant const& f,
                                   std::string const& field,
                                   int debtor) {
        for (std::size_t s = 0; s < f.num_segments(); ++s)
        {
            if (f.breaks()[s] < spec.horizon && !(f.values()[s] > 0))
            {
                report(ViolationKind::NonPositiveBaseline,
                       field,
                       debtor,
                       static_cast<int>(s),
                       "baseline rate must be strictly positive on the "
                       "horizon");
            }
        }
    };

    for (std::size_t k = 0; k < n; ++k)
    {
        auto di = static_cast<int>(k);
        std::string prefix = "debtors[" + std::to_string(k) + "].";
        bool alpha_ok = check_pc(spec.alpha[k], prefix + "alpha", di);
        bool gamma_ok = check_pc(spec.gamma[k], prefix + "gamma", di);
        if (alpha_ok)
        {
            positive_on_horizon(spec.alpha[k], prefix + "alpha", di);
        }
        if (gamma_ok)
        {
            positive_on_horizon(spec.gamma[k], prefix + "gamma", di);
        }
        double p = spec.p0[k];
        bool p_ok = p >= 0 && p < 1;
        if (!p_ok)
        {
            report(ViolationKind::BadProbability,
                   prefix + "p0",
                   di,
                   -1,
                   "p0 must lie in [0, 1)");
        }
        if (alpha_ok && p_ok && std::isfinite(spec.horizon) && p > 0)
        {
            double cap = p * std::exp(spec.alpha[k].integral(spec.horizon));
            if (cap > 1 - spec.epsilon_g)
            {
                std::ostringstream os;
                os << "p0 * exp(int alpha) = " << cap << " exceeds 1 - epsilon_g";
                report(ViolationKind::CapViolation, prefix + "p0", di, -1, os.str());
            }
        }
        for (std::size_t j = 0; j < n; ++j)
        {
            for (auto [mat, name] :
                 {std::pair{&spec.phiA, "phiA"}, std::pair{&spec.phiB, "phiB"}})
            {
                std::string field = std::string(name) + "[" + std::to_string(k)
                                    + "][" + std::to_string(j) + "]";
                auto const& f = (*mat)[k][j];
                if (check_pc(f, field, di) && k == j && !f.is_zero())
                {
                    report(ViolationKind::DiagonalImpact,
                           field,
                           di,
                           -1,
                           "self-impact must be zero");
                }
            }
        }
    }

    if (out.empty())
    {
        result.model.emplace(ValidatedModel(std::move(spec)));
    }
    return result;
}

//! Validate or throw ModelError listing every violation.
inline ValidatedModel validated(ModelSpec spec)
{
    auto result = validate_spec(std::move(spec));
    if (!result.ok())
    {
        throw ModelError(std::move(result.violations));
    }
    return std::move(*result.model);
}

//---------------------------------------------------------------------------//
// Coefficient evaluation
//---------------------------------------------------------------------------//

namespace detail
{
inline void check_time(ValidatedModel const& model, double t, char const* who)
{
    if (!(t >= 0 && t <= model.horizon()))
    {
        throw std::out_of_range(std::string(who) + ": time " + std::to_string(t)
                                + " outside [0, horizon]");
    }
}
inline void check_debtor(ValidatedModel const& model, std::size_t k, char const* who)
{
    if (k >= model.n())
    {
        throw std::out_of_range(std::string(who) + ": debtor "
                                + std::to_string(k) + " out of range");
    }
}
}  // namespace detail

/*!
 * Conditional default probability at an environment event, pre-event branch:
 * p0(k) exp(int_0^t alpha(k)).
 */
inline double g_value(ValidatedModel const& model, std::size_t k, double t)
{
    detail::check_debtor(model, k, "g_value");
    detail::check_time(model, t, "g_value");
    return model.hazard(k).g(t);
}

//! Jump of the hazard process at the environment event: -ln(1 - g).
inline double hazard_jump(ValidatedModel const& model, std::size_t k, double t)
{
    double g = g_value(model, k, t);
    if (!(g < 1))
    {
        throw ModelError({{ViolationKind::CapViolation,
                           "debtors[" + std::to_string(k) + "].p0",
                           static_cast<int>(k),
                           -1,
                           "g reached 1 at t = " + std::to_string(t)}});
    }
    return -std::log1p(-g);
}

struct Intensities
{
    double lambda;  //!< total default intensity
    double beta;    //!< environment-coincident (B-type) part
};

/*!
 * Default intensity and its B-type part for debtor k at time t.
 *
 * After the environment event (t > T(k)) only the A-channel remains.
 */
inline Intensities base_intensities(ValidatedModel const& model,
                                    std::size_t k,
                                    double t,
                                    bool T_occurred)
{
    detail::check_debtor(model, k, "base_intensities");
    detail::check_time(model, t, "base_intensities");
    double a = model.alpha(k)(t);
    double beta = T_occurred ? 0.0 : model.hazard(k).g(t) * model.gamma(k)(t);
    return {a + beta, beta};
}

/*!
 * Aggregate direct impact on debtor j from C (always) and from D (only while
 * the D-member's environment event is pending).
 */
inline double psi_A(ValidatedModel const& model,
                    DebtorSet C,
                    DebtorSet D,
                    std::size_t j,
                    double t,
                    std::span<double const> T_times)
{
    if (!C.disjoint(D) || C.contains(j) || D.contains(j))
    {
        throw std::invalid_argument(
            "psi_A: C and D must be disjoint and exclude j");
    }
    if (T_times.size() != model.n())
    {
        throw std::invalid_argument("psi_A: need one T time per debtor");
    }
    double total = 0;
    C.for_each([&](std::size_t k) { total += model.phiA(k, j)(t); });
    D.for_each([&](std::size_t k) {
        if (T_times[k] > t)
        {
            total += model.phiA(k, j)(t);
        }
    });
    return total;
}

//---------------------------------------------------------------------------//
}  // namespace overspill
