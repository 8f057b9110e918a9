#include "recomb/rng.hpp"

#include <random>

#include "recomb/errors.hpp"

namespace recomb {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& x, const std::array<std::uint32_t, 2>& k) {
    std::uint64_t p0 = std::uint64_t(kPhiloxM0) * x[0];
    std::uint64_t p1 = std::uint64_t(kPhiloxM1) * x[2];
    std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

} // namespace

namespace detail {

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        philox_round(counter, key);
    }
    return counter;
}

} // namespace detail

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t k = splitmix64(seed) ^ splitmix64(splitmix64(stream));
    key_ = {std::uint32_t(k), std::uint32_t(k >> 32)};
    counter_ = {0, 0, 0, 0};
    block_pos_ = 4; // force generation on first use
}

void RngStream::next_block() {
    block_ = detail::philox4x32_10(counter_, key_);
    block_pos_ = 0;
    for (int i = 0; i < 4; ++i)
        if (++counter_[i] != 0) break;
}

RngStream::result_type RngStream::operator()() {
    if (block_pos_ >= 4) next_block();
    std::uint64_t lo = block_[block_pos_++];
    if (block_pos_ >= 4) next_block();
    std::uint64_t hi = block_[block_pos_++];
    return (hi << 32) | lo;
}

double RngStream::uniform() {
    return double((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
    if (n == 0) throw ValidationError("uniform_below(0)");
    // rejection to avoid modulo bias
    std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
        x = (*this)();
    } while (x >= limit);
    return x % n;
}

std::vector<long long> multinomial(RngStream& rng, long long n, const std::vector<double>& p) {
    if (p.empty()) throw ValidationError("empty probability vector in multinomial");
    std::vector<long long> counts(p.size(), 0);
    double remaining = 1.0;
    long long left = n;
    for (std::size_t i = 0; i + 1 < p.size() && left > 0; ++i) {
        if (p[i] < 0.0) throw ValidationError("negative probability in multinomial");
        double q = (remaining > 0.0) ? p[i] / remaining : 1.0;
        if (q >= 1.0) {
            counts[i] = left;
            left = 0;
            break;
        }
        std::binomial_distribution<long long> binom(left, q);
        counts[i] = binom(rng);
        left -= counts[i];
        remaining -= p[i];
    }
    counts.back() += left;
    return counts;
}

int categorical(RngStream& rng, const std::vector<double>& p) {
    double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
}

} // namespace recomb
