#pragma once

#include <omp.h>

#include "eif/forest.hpp"

namespace eif::detail {

inline int thread_count(Threads threads) {
    return threads.count > 0 ? threads.count : omp_get_max_threads();
}

} // namespace eif::detail
