#pragma once

#include <cstddef>
#include <vector>

#include <omp.h>

namespace neurise {

/// Worker-thread bound for all parallel kernels. 0 means "resolve
/// automatically": the NEURISE_THREADS environment variable if set,
/// otherwise the OpenMP default.
void set_max_threads(int n);
int max_threads();

namespace par {

/// Chunk boundaries are a function of the problem size only, never of the
/// thread count, and every chunk is summed serially in index order before
/// the per-chunk partials are combined in chunk order. Reductions are
/// therefore bit-identical for any thread count, including 1.
inline std::size_t chunk_size(std::size_t n, std::size_t min_chunk = 1024,
                              std::size_t max_chunks = 4096) {
    std::size_t c = min_chunk;
    if (n > c * max_chunks) c = (n + max_chunks - 1) / max_chunks;
    return c;
}

inline bool run_parallel(std::size_t n) {
    return n >= 2048 && max_threads() > 1 && !omp_in_parallel();
}

/// sum_{i<n} term(i), deterministic chunked reduction.
template <class F>
double sum(std::size_t n, F&& term) {
    if (n == 0) return 0.0;
    const std::size_t chunk = chunk_size(n);
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(n_chunks, 0.0);
    const bool go = run_parallel(n);
#pragma omp parallel for schedule(static) num_threads(max_threads()) if (go)
    for (long long c = 0; c < static_cast<long long>(n_chunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * chunk;
        const std::size_t hi = lo + chunk < n ? lo + chunk : n;
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[static_cast<std::size_t>(c)] = acc;
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

/// Elementwise parallel loop; body(i) must write only slot i of its outputs.
template <class Body>
void for_each(std::size_t n, Body&& body) {
    const bool go = run_parallel(n);
#pragma omp parallel for schedule(static) num_threads(max_threads()) if (go)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        body(static_cast<std::size_t>(i));
}

/// Accumulates a dim-sized vector over chunks of [0, n): body(lo, hi, buf)
/// must add the contribution of samples [lo, hi) into buf, serially in
/// index order. Per-chunk buffers are combined in chunk order and added
/// into out (out is not cleared). Chunk boundaries depend only on n, so
/// the result is bit-identical for any thread count. Bodies needing
/// scratch can key it off omp_get_thread_num().
template <class ChunkBody>
void accumulate_chunks(std::size_t n, std::size_t dim, double* out, ChunkBody&& body) {
    if (n == 0) return;
    const std::size_t chunk = chunk_size(n, 256, 1024);
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    if (n_chunks == 1 || !run_parallel(n)) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const std::size_t lo = c * chunk;
            body(lo, lo + chunk < n ? lo + chunk : n, out);
        }
        return;
    }
    std::vector<double> bufs(n_chunks * dim, 0.0);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (long long c = 0; c < static_cast<long long>(n_chunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * chunk;
        const std::size_t hi = lo + chunk < n ? lo + chunk : n;
        body(lo, hi, bufs.data() + static_cast<std::size_t>(c) * dim);
    }
    for (std::size_t c = 0; c < n_chunks; ++c) {
        const double* buf = bufs.data() + c * dim;
        for (std::size_t j = 0; j < dim; ++j) out[j] += buf[j];
    }
}

/// Per-sample convenience wrapper over accumulate_chunks.
template <class Body>
void accumulate(std::size_t n, std::size_t dim, double* out, Body&& body) {
    accumulate_chunks(n, dim, out, [&](std::size_t lo, std::size_t hi, double* buf) {
        for (std::size_t i = lo; i < hi; ++i) body(i, buf);
    });
}

}  // namespace par
}  // namespace neurise
