#include "permtest/kernels.hpp"

#if defined(PERMTEST_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <cstring>

namespace permtest::kernels::avx2 {

RelCounts count_rel(const double* values, std::size_t n, double threshold) {
    RelCounts c;
    const __m256d t = _mm256_set1_pd(threshold);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(values + i);
        const int gt = _mm256_movemask_pd(_mm256_cmp_pd(v, t, _CMP_GT_OQ));
        const int eq = _mm256_movemask_pd(_mm256_cmp_pd(v, t, _CMP_EQ_OQ));
        c.greater += static_cast<unsigned>(__builtin_popcount(gt));
        c.equal += static_cast<unsigned>(__builtin_popcount(eq));
    }
    for (; i < n; ++i) {
        c.greater += values[i] > threshold;
        c.equal += values[i] == threshold;
    }
    return c;
}

PairSums pair_select_sum(const double* values, const std::uint8_t* flags, std::size_t n) {
    __m256d acc_sel = _mm256_setzero_pd();
    __m256d acc_rest = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(values + i);
        std::uint32_t packed;
        std::memcpy(&packed, flags + i, 4);
        const __m256i lanes = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(packed)));
        // All-ones in lanes whose flag is zero.
        const __m256d zero_mask =
            _mm256_castsi256_pd(_mm256_cmpeq_epi64(lanes, _mm256_setzero_si256()));
        acc_rest = _mm256_add_pd(acc_rest, _mm256_and_pd(zero_mask, v));
        acc_sel = _mm256_add_pd(acc_sel, _mm256_andnot_pd(zero_mask, v));
    }
    alignas(32) double lane_sel[4];
    alignas(32) double lane_rest[4];
    _mm256_store_pd(lane_sel, acc_sel);
    _mm256_store_pd(lane_rest, acc_rest);
    PairSums s;
    s.selected = (lane_sel[0] + lane_sel[1]) + (lane_sel[2] + lane_sel[3]);
    s.rest = (lane_rest[0] + lane_rest[1]) + (lane_rest[2] + lane_rest[3]);
    for (; i < n; ++i) {
        if (flags[i])
            s.selected += values[i];
        else
            s.rest += values[i];
    }
    return s;
}

} // namespace permtest::kernels::avx2

#endif // PERMTEST_HAVE_AVX2_KERNELS
