/**
 * @file parallel.hpp
 * @brief Index-parallel loop over std::thread workers.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "snfsurrogate/errors.hpp"

namespace snf {

/// Worker count from SNF_WORKERS, else the hardware concurrency (at least 1).
inline std::size_t worker_count() {
    if (const char* env = std::getenv("SNF_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    const auto hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// A loop body failed; carries the failing index and the original message.
class IndexedFailure : public Error {
public:
    IndexedFailure(std::size_t index, std::exception_ptr cause)
        : Error("item " + std::to_string(index) + ": " + describe(cause)), index_(index), cause_(cause) {}

    std::size_t index() const noexcept { return index_; }
    std::exception_ptr cause() const noexcept { return cause_; }

private:
    static std::string describe(std::exception_ptr p) {
        try {
            std::rethrow_exception(p);
        } catch (const std::exception& e) {
            return e.what();
        } catch (...) {
            return "unknown error";
        }
    }
    std::size_t index_;
    std::exception_ptr cause_;
};

/// Calls fn(i) for every i in [0, n). fn must only write to slot i of its outputs.
/// If any call throws, the exception of the lowest failing index is rethrown
/// together with that index.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    struct Failure {
        std::size_t index;
        std::exception_ptr error;
    };
    workers = std::max<std::size_t>(1, std::min(workers, n));
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::vector<Failure> failures;

    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                failures.push_back({i, std::current_exception()});
            }
        }
    };
    if (workers == 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    }
    if (failures.empty()) return;
    const Failure* first = &failures.front();
    for (const auto& f : failures)
        if (f.index < first->index) first = &f;
    throw IndexedFailure(first->index, first->error);
}

}  // namespace snf
