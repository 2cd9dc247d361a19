#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used by the statistic and counting machinery.
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant; the active backend is chosen once at startup. Set the environment
// variable PERMTEST_KERNELS=scalar to pin the reference implementation.
//
// count_rel is exact (integer comparisons) and therefore identical across
// backends. pair_select_sum reassociates additions lane-wise under AVX2, so
// its result may differ from the scalar kernel in the last few ulps; within
// one process a single backend is used for every evaluation, which is what
// the bit-exact tie guarantees elsewhere in the library rely on.

namespace permtest::kernels {

struct RelCounts {
    std::uint64_t greater = 0;
    std::uint64_t equal = 0;
};

struct PairSums {
    double selected = 0.0;
    double rest = 0.0;
};

// Counts entries strictly greater than / exactly equal to the threshold.
RelCounts count_rel(const double* values, std::size_t n, double threshold);

// Accumulates values[i] into `selected` where flags[i] != 0, into `rest`
// otherwise, scanning i in ascending order.
PairSums pair_select_sum(const double* values, const std::uint8_t* flags, std::size_t n);

// Name of the dispatched backend: "avx2" or "scalar".
const char* active_backend();

namespace scalar {
RelCounts count_rel(const double* values, std::size_t n, double threshold);
PairSums pair_select_sum(const double* values, const std::uint8_t* flags, std::size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define PERMTEST_HAVE_AVX2_KERNELS 1
namespace avx2 {
RelCounts count_rel(const double* values, std::size_t n, double threshold);
PairSums pair_select_sum(const double* values, const std::uint8_t* flags, std::size_t n);
} // namespace avx2
#endif

} // namespace permtest::kernels
