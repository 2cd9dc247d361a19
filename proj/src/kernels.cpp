#include "permtest/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace permtest::kernels {

namespace {

struct Backend {
    const char* name;
    RelCounts (*count_rel)(const double*, std::size_t, double);
    PairSums (*pair_select_sum)(const double*, const std::uint8_t*, std::size_t);
};

constexpr Backend kScalar{"scalar", &scalar::count_rel, &scalar::pair_select_sum};

#if defined(PERMTEST_HAVE_AVX2_KERNELS)
constexpr Backend kAvx2{"avx2", &avx2::count_rel, &avx2::pair_select_sum};
#endif

Backend select_backend() {
    if (const char* env = std::getenv("PERMTEST_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0)
            return kScalar;
    }
#if defined(PERMTEST_HAVE_AVX2_KERNELS)
    if (__builtin_cpu_supports("avx2"))
        return kAvx2;
#endif
    return kScalar;
}

const Backend& active() {
    static const Backend backend = select_backend();
    return backend;
}

} // namespace

RelCounts count_rel(const double* values, std::size_t n, double threshold) {
    return active().count_rel(values, n, threshold);
}

PairSums pair_select_sum(const double* values, const std::uint8_t* flags, std::size_t n) {
    return active().pair_select_sum(values, flags, n);
}

const char* active_backend() {
    return active().name;
}

} // namespace permtest::kernels
