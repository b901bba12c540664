#ifndef FIGINT_NUMERIC_HPP
#define FIGINT_NUMERIC_HPP

#include <atomic>
#include <cmath>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace figint {

/// Neumaier-compensated accumulator.  Summation order is part of the
/// contract: all reductions in this library feed terms in a fixed index
/// order so results are bitwise reproducible across runs and thread counts.
class KahanSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double kahan_total(std::span<const double> terms) noexcept {
    KahanSum acc;
    for (double t : terms) acc.add(t);
    return acc.value();
}

namespace detail {
inline std::atomic<unsigned>& thread_count_slot() noexcept {
    static std::atomic<unsigned> n{1};
    return n;
}
} // namespace detail

inline void set_thread_count(unsigned n) noexcept {
    detail::thread_count_slot().store(n == 0 ? 1u : n, std::memory_order_relaxed);
}
inline unsigned thread_count() noexcept {
    return detail::thread_count_slot().load(std::memory_order_relaxed);
}

/// Applies fn(i) for i in [0, n).  Work is split into contiguous chunks,
/// one per worker; fn must only write to slots owned by index i.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers = thread_count();
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = std::min(n, w * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Evaluates term(i) for i in [0, n) in parallel, then reduces the terms
/// with compensated summation in index order.  The reduction order is
/// independent of the thread count.
template <typename TermFn>
double parallel_kahan_sum(std::size_t n, TermFn&& term) {
    std::vector<double> terms(n);
    parallel_for(n, [&](std::size_t i) { terms[i] = term(i); });
    return kahan_total(terms);
}

} // namespace figint

#endif // FIGINT_NUMERIC_HPP
