#include "permtest/kernels.hpp"

namespace permtest::kernels::scalar {

RelCounts count_rel(const double* values, std::size_t n, double threshold) {
    RelCounts c;
    for (std::size_t i = 0; i < n; ++i) {
        c.greater += values[i] > threshold;
        c.equal += values[i] == threshold;
    }
    return c;
}

PairSums pair_select_sum(const double* values, const std::uint8_t* flags, std::size_t n) {
    PairSums s;
    for (std::size_t i = 0; i < n; ++i) {
        if (flags[i])
            s.selected += values[i];
        else
            s.rest += values[i];
    }
    return s;
}

} // namespace permtest::kernels::scalar
