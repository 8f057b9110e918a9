#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace recomb {

// Philox4x32-10 counter-based generator. Cheap to construct, so every
// replicate gets its own stream keyed by (seed, stream id); outputs are
// independent of scheduling order across workers.
class RngStream {
  public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()();

    // uniform in [0, 1)
    double uniform();

    // uniform integer in [0, n)
    std::uint64_t uniform_below(std::uint64_t n);

  private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_;
    int block_pos_;

    void next_block();
};

std::uint64_t splitmix64(std::uint64_t x);

namespace detail {

// Raw 10-round block function, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

} // namespace detail

// (n_1,...,n_k) ~ M(n, p) via sequential conditional binomials. p must sum
// to 1 up to floating-point rounding; the last category absorbs the rounding
// remainder so the counts always sum to n exactly.
std::vector<long long> multinomial(RngStream& rng, long long n, const std::vector<double>& p);

// Index drawn from cumulative weights; linear scan, for small categoricals.
int categorical(RngStream& rng, const std::vector<double>& p);

} // namespace recomb
