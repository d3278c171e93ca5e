#include "wqed/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wqed {

void parallel_for(int n, int n_threads, const std::function<void(int)>& fn) {
    if (n < 0) throw std::invalid_argument("parallel_for: n must be >= 0");
    if (n_threads < 1) throw std::invalid_argument("parallel_for: n_threads must be >= 1");
    if (n == 0) return;

    std::exception_ptr first_error;
    int first_error_index = n;
    std::mutex error_mutex;

    auto guarded = [&](int i) {
        try {
            fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (i < first_error_index) {
                first_error_index = i;
                first_error = std::current_exception();
            }
        }
    };

    if (n_threads == 1 || n == 1) {
        for (int i = 0; i < n; ++i) guarded(i);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                guarded(i);
            }
        };
        std::vector<std::thread> pool;
        const int count = std::min(n_threads, n);
        pool.reserve(static_cast<std::size_t>(count));
        for (int w = 0; w < count; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wqed
