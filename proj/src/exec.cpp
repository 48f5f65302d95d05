#include "uavmac/exec.hpp"

#include <cstdlib>
#include <string>

namespace uavmac {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void apply_thread_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("UAVMAC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

}  // namespace uavmac
