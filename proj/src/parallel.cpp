#include "reslab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace reslab {

std::size_t worker_count() {
    std::size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("RESLAB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return std::min<std::size_t>(static_cast<std::size_t>(v), 256);
        } catch (const std::exception&) {
            // ignore malformed values
        }
    }
    return hw;
}

}  // namespace reslab
