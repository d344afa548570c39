//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/parallel.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace overspill
{
//---------------------------------------------------------------------------//
/*!
 * Worker count: OVERSPILL_THREADS if set to a positive integer, otherwise
 * the hardware concurrency.
 */
inline std::size_t default_threads()
{
    if (char const* env = std::getenv("OVERSPILL_THREADS"))
    {
        try
        {
            long v = std::stol(env);
            if (v > 0)
            {
                return static_cast<std::size_t>(v);
            }
        }
        catch (std::exception const&)
        {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

//---------------------------------------------------------------------------//
/*!
 * Evaluate f(i) for i in [0, count) on \c threads workers.
 *
 * Results are stored by index, so the output never depends on scheduling.
 * The first exception thrown by any task is rethrown after all workers stop.
 */
template<class F>
auto parallel_map(std::size_t count, std::size_t threads, F&& f)
    -> std::vector<decltype(f(std::size_t{}))>
{
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(count);
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1)
    {
        for (std::size_t i = 0; i < count; ++i)
        {
            out[i] = f(i);
        }
        return out;
    }

    constexpr std::size_t chunk = 64;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed))
        {
            std::size_t begin = next.fetch_add(chunk);
            if (begin >= count)
            {
                return;
            }
            std::size_t end = std::min(count, begin + chunk);
            try
            {
                for (std::size_t i = begin; i < end; ++i)
                {
                    out[i] = f(i);
                }
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                {
                    error = std::current_exception();
                }
                failed = true;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w)
    {
        pool.emplace_back(worker);
    }
    for (auto& th : pool)
    {
        th.join();
    }
    if (error)
    {
        std::rethrow_exception(error);
    }
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace overspill
