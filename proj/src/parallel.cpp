#include "pslab/parallel.hpp"

namespace pslab {

namespace {
std::atomic<unsigned> g_worker_override{0};
}

unsigned worker_count() {
    const unsigned forced = g_worker_override.load();
    if (forced != 0) return forced;
    return std::max(1u, std::thread::hardware_concurrency());
}

void set_worker_count(unsigned n) { g_worker_override.store(n); }

} // namespace pslab
