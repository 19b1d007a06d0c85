#pragma once

#include <cstdint>
#include <string_view>

namespace geonorm {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t v, int k) noexcept {
    return (v << k) | (v >> (64 - k));
}

} // namespace detail

// Deterministic random stream (xoshiro256++ seeded through splitmix64).
// Move-only so two pieces of code cannot silently share one stream; use
// child(index) to derive independent substreams whose output depends only
// on (root seed, index), never on how much the parent has been consumed.
class RngStream {
public:
    static constexpr std::string_view algorithm = "xoshiro256++";

    explicit RngStream(std::uint64_t seed) noexcept : seed_(seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = detail::splitmix64(sm);
    }

    RngStream(const RngStream&) = delete;
    RngStream& operator=(const RngStream&) = delete;
    RngStream(RngStream&&) noexcept = default;
    RngStream& operator=(RngStream&&) noexcept = default;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t draw_count() const noexcept { return draws_; }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result =
            detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        ++draws_;
        return result;
    }

    // Uniform draw strictly inside (0, 1): 52 random bits centered on the
    // grid k + 1/2, so neither endpoint is attainable.
    double uniform_open() noexcept {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    // Substream for replication `index`; reproducible from the root seed
    // alone, so replications can be assigned to threads in any order.
    [[nodiscard]] RngStream child(std::uint64_t index) const noexcept {
        std::uint64_t sm = index + 0x6A09E667F3BCC909ull;
        return RngStream(seed_ ^ detail::splitmix64(sm));
    }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t draws_ = 0;
    std::uint64_t state_[4] = {};
};

} // namespace geonorm
