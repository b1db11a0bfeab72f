#include "ergoprobe/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ergoprobe {

unsigned worker_count() {
    if (const char* env = std::getenv("ERGOPROBE_PARALLELISM")) {
        try {
            const long v = std::stol(env);
            if (v >= 1)
                return unsigned(v);
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace ergoprobe
