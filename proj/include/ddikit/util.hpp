#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace ddikit {

// FNV-1a over the label mixed with the master seed. Gives every pipeline
// stage its own reproducible stream from one knob.
inline std::uint64_t derive_seed(std::uint64_t master, const std::string& label) {
    std::uint64_t h = 1469598103934665603ull ^ master;
    for (unsigned char c : label) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Runs fn(begin, end) over [0, n) split into contiguous chunks. Results
// must be written to disjoint indices so the merge is deterministic.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (workers <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    std::size_t chunks = std::min<std::size_t>(workers, n);
    std::size_t per = (n + chunks - 1) / chunks;
    std::vector<std::thread> pool;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t begin = c * per;
        std::size_t end = std::min(n, begin + per);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

// Fixed-format double for reproducible report files.
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

}  // namespace ddikit
