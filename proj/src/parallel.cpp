#include "softglcm/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace softglcm {

namespace {

int initial_thread_count() {
    if (const char* env = std::getenv("SOFTGLCM_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
        }
    }
    return 1;
}

std::atomic<int>& thread_setting() {
    static std::atomic<int> value{initial_thread_count()};
    return value;
}

}  // namespace

int thread_count() { return thread_setting().load(); }

void set_thread_count(int n) { thread_setting().store(std::max(n, 1)); }

}  // namespace softglcm
