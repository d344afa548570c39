//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/debtor_set.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace overspill
{
//---------------------------------------------------------------------------//
inline constexpr std::size_t kMaxDebtors = 20;

//---------------------------------------------------------------------------//
/*!
 * Set of debtor indices stored as a bitmask.
 *
 * Sets are totally ordered by (cardinality, mask), which is the order used to
 * lay out the subset ladder.
 */
class DebtorSet
{
  public:
    using mask_type = std::uint32_t;

    constexpr DebtorSet() = default;
    constexpr explicit DebtorSet(mask_type mask) : mask_(mask) {}

    DebtorSet(std::initializer_list<std::size_t> members)
    {
        for (auto k : members)
        {
            *this = this->with(k);
        }
    }

    static DebtorSet all(std::size_t n)
    {
        check_index(n == 0 ? 0 : n - 1);
        return DebtorSet(n == 0 ? 0u : (mask_type{1} << n) - 1);
    }
    static DebtorSet single(std::size_t k) { return DebtorSet{}.with(k); }

    constexpr mask_type mask() const { return mask_; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr std::size_t size() const
    {
        return static_cast<std::size_t>(std::popcount(mask_));
    }
    constexpr bool contains(std::size_t k) const
    {
        return k < kMaxDebtors && ((mask_ >> k) & 1u);
    }

    DebtorSet with(std::size_t k) const
    {
        check_index(k);
        return DebtorSet(mask_ | (mask_type{1} << k));
    }
    DebtorSet without(std::size_t k) const
    {
        check_index(k);
        return DebtorSet(mask_ & ~(mask_type{1} << k));
    }

    constexpr bool subset_of(DebtorSet other) const
    {
        return (mask_ & ~other.mask_) == 0;
    }
    constexpr bool disjoint(DebtorSet other) const
    {
        return (mask_ & other.mask_) == 0;
    }

    friend constexpr DebtorSet operator|(DebtorSet a, DebtorSet b)
    {
        return DebtorSet(a.mask_ | b.mask_);
    }
    friend constexpr DebtorSet operator&(DebtorSet a, DebtorSet b)
    {
        return DebtorSet(a.mask_ & b.mask_);
    }
    //! Set difference
    friend constexpr DebtorSet operator-(DebtorSet a, DebtorSet b)
    {
        return DebtorSet(a.mask_ & ~b.mask_);
    }
    friend constexpr bool operator==(DebtorSet, DebtorSet) = default;
    friend constexpr std::strong_ordering operator<=>(DebtorSet a, DebtorSet b)
    {
        if (auto c = a.size() <=> b.size(); c != 0)
        {
            return c;
        }
        return a.mask_ <=> b.mask_;
    }

    //! Members in increasing index order.
    std::vector<std::size_t> members() const
    {
        std::vector<std::size_t> result;
        for (mask_type m = mask_; m; m &= m - 1)
        {
            result.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        }
        return result;
    }

    //! Visit members in increasing index order.
    template<class F>
    void for_each(F&& f) const
    {
        for (mask_type m = mask_; m; m &= m - 1)
        {
            f(static_cast<std::size_t>(std::countr_zero(m)));
        }
    }

    //! Visit every subset, including the empty set and the set itself.
    template<class F>
    void for_each_subset(F&& f) const
    {
        mask_type sub = mask_;
        while (true)
        {
            f(DebtorSet(sub));
            if (sub == 0)
            {
                break;
            }
            sub = (sub - 1) & mask_;
        }
    }

    std::string to_string() const
    {
        std::string result = "{";
        bool first = true;
        this->for_each([&](std::size_t k) {
            if (!first)
            {
                result += ",";
            }
            result += std::to_string(k);
            first = false;
        });
        return result + "}";
    }

  private:
    mask_type mask_ = 0;

    static void check_index(std::size_t k)
    {
        if (k >= kMaxDebtors)
        {
            throw std::out_of_range("debtor index " + std::to_string(k)
                                    + " exceeds the supported maximum of "
                                    + std::to_string(kMaxDebtors));
        }
    }
};

//---------------------------------------------------------------------------//
}  // namespace overspill
