#include "panofuse/util.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace panofuse {

namespace {
std::atomic<int> g_default_jobs{0};
}

int default_jobs() {
    int j = g_default_jobs.load();
    if (j > 0) return j;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_default_jobs(int jobs) { g_default_jobs.store(jobs); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn,
                  int jobs) {
    if (n == 0) return;
    if (jobs <= 0) jobs = default_jobs();
    std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    if (chunks <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(chunks);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::size_t per = n / chunks;
    std::size_t rem = n % chunks;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t end = begin + per + (c < rem ? 1 : 0);
        threads.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double median(std::vector<double> values) {
    if (values.empty()) throw Error("median of empty range");
    std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    return 0.5 * (hi + values[mid - 1]);
}

double percentile(std::vector<double> values, double pct) {
    if (values.empty()) throw Error("percentile of empty range");
    pct = std::clamp(pct, 0.0, 100.0);
    double rank = pct / 100.0 * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(rank));
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = rank - static_cast<double>(lo);
    std::nth_element(values.begin(), values.begin() + lo, values.end());
    double vlo = values[lo];
    std::nth_element(values.begin(), values.begin() + hi, values.end());
    return vlo + frac * (values[hi] - vlo);
}

}  // namespace panofuse
