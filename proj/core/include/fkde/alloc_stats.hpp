#pragma once

#include <cstddef>
#include <cstdlib>
#include <cstring>
#include <new>

// Accounting hook for the engine's transient scratch buffers. Buffers that
// are returned to the caller (density values, score matrices, debiased
// samples) are not counted; everything freed before an operation returns is.
namespace fkde::alloc_stats {

std::size_t current_scalars();
std::size_t peak_scalars();
void reset_peak();

void add(std::size_t n_scalars);
void sub(std::size_t n_scalars);

/// Zero-initialized scratch buffer charged against the transient accounting
/// for its whole lifetime. 64-byte aligned: SIMD reduction trees must not
/// depend on where the allocator happened to place the block, or results
/// would vary with worker count.
class TrackedBuffer {
public:
    TrackedBuffer() = default;
    explicit TrackedBuffer(std::size_t n) { allocate(n); }
    ~TrackedBuffer() { release(); }

    TrackedBuffer(const TrackedBuffer&) = delete;
    TrackedBuffer& operator=(const TrackedBuffer&) = delete;
    TrackedBuffer(TrackedBuffer&& o) noexcept : data_(o.data_), size_(o.size_) {
        o.data_ = nullptr;
        o.size_ = 0;
    }

    void resize(std::size_t n) {
        release();
        allocate(n);
    }

    double* data() noexcept { return data_; }
    const double* data() const noexcept { return data_; }
    std::size_t size() const noexcept { return size_; }
    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

private:
    void allocate(std::size_t n) {
        size_ = n;
        if (n == 0) {
            data_ = nullptr;
            return;
        }
        const std::size_t bytes = (n * sizeof(double) + 63) / 64 * 64;
        data_ = static_cast<double*>(std::aligned_alloc(64, bytes));
        if (data_ == nullptr) {
            throw std::bad_alloc();
        }
        std::memset(data_, 0, bytes);
        add(n);
    }

    void release() noexcept {
        if (data_ != nullptr) {
            std::free(data_);
            sub(size_);
        }
        data_ = nullptr;
        size_ = 0;
    }

    double* data_ = nullptr;
    std::size_t size_ = 0;
};

}  // namespace fkde::alloc_stats
