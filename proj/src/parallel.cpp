#include "afmi/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace afmi {

unsigned worker_count(unsigned requested) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("AFMI_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) n = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            // unparsable values fall back to auto
        }
    }
    if (requested > 0) n = std::min(n, requested);
    return n;
}

}  // namespace afmi
