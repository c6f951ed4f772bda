#pragma once

#include <cstdint>

namespace wvx {

// Counters collected while a stats_scope is alive on the current thread.
struct query_stats {
    std::uint64_t node_visits = 0;
};

namespace detail {
inline thread_local query_stats* active_stats = nullptr;

inline void note_visit() {
    if (active_stats) ++active_stats->node_visits;
}
}  // namespace detail

// RAII toggle: while alive, wavelet-tree algorithms on this thread add their
// node visits to `counters()`. Scopes nest; the innermost one collects.
class stats_scope {
public:
    stats_scope() : previous_(detail::active_stats) { detail::active_stats = &stats_; }
    ~stats_scope() { detail::active_stats = previous_; }
    stats_scope(const stats_scope&) = delete;
    stats_scope& operator=(const stats_scope&) = delete;

    const query_stats& counters() const { return stats_; }
    std::uint64_t node_visits() const { return stats_.node_visits; }

private:
    query_stats stats_;
    query_stats* previous_;
};

}  // namespace wvx
