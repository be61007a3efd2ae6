#pragma once

#include <cstdint>
#include <exception>
#include <mutex>

namespace nlror {

/// Caps the OpenMP team size for the library kernels; n <= 0 restores the runtime default.
void set_thread_count(int n);
int thread_count();

/// Mixes (seed, index) into an independent 64-bit seed (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

/// Holds the first exception thrown inside an OpenMP region so it can be rethrown outside it.
class ExceptionSlot {
public:
    template <class Fn>
    void run(Fn&& fn) noexcept {
        try {
            fn();
        } catch (...) {
            std::lock_guard lock(mutex_);
            if (!error_) {
                error_ = std::current_exception();
            }
        }
    }

    void rethrow() const {
        if (error_) {
            std::rethrow_exception(error_);
        }
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

} // namespace nlror
