#include "neurise/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace neurise {

namespace {
std::atomic<int> g_max_threads{0};

int resolve_default() {
    if (const char* env = std::getenv("NEURISE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return omp_get_max_threads();
}
}  // namespace

void set_max_threads(int n) { g_max_threads.store(n > 0 ? n : 0); }

int max_threads() {
    const int n = g_max_threads.load();
    if (n > 0) return n;
    static const int resolved = resolve_default();
    return resolved;
}

}  // namespace neurise
