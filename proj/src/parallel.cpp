#include "sepselect/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace sepselect {

int resolve_workers(int requested) {
    int workers = requested;
    if (workers <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        workers = hw == 0 ? 1 : static_cast<int>(hw);
    }
    if (const char* cap = std::getenv("SEPSELECT_THREADS")) {
        try {
            int limit = std::stoi(cap);
            if (limit >= 1) workers = std::min(workers, limit);
        } catch (const std::exception&) {
            // unparseable cap is ignored
        }
    }
    return std::max(workers, 1);
}

void parallel_chunks(std::size_t count, int workers,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    if (count == 0) return;
    std::size_t nworkers = std::min<std::size_t>(std::max(workers, 1), count);
    if (nworkers == 1) {
        fn(0, count);
        return;
    }
    std::size_t chunk = (count + nworkers - 1) / nworkers;
    std::vector<std::thread> pool;
    pool.reserve(nworkers - 1);
    for (std::size_t w = 1; w < nworkers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(begin + chunk, count);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    fn(0, std::min(chunk, count));
    for (auto& t : pool) t.join();
}

}  // namespace sepselect
