#include "nlror/parallel.hpp"

#include <omp.h>

namespace nlror {

namespace {
int g_threads = 0;
}

void set_thread_count(int n) {
    g_threads = n > 0 ? n : 0;
}

int thread_count() {
    return g_threads > 0 ? g_threads : omp_get_max_threads();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace nlror
