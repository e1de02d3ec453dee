#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace eif {

class Dataset;

/// Identifier written into serialized models. Bump the suffix whenever the
/// generator, the stream-derivation rule or any draw transform changes.
inline constexpr std::string_view kRngFamily = "xoshiro256starstar+splitmix64/polar-normal/v1";

/// Deterministic random stream (xoshiro256**, period 2^256 - 1).
///
/// A stream is identified by its origin (seed, stream_index). The state is a
/// pure function of the origin, so a child stream obtained with
/// derive_stream() does not depend on how many draws the parent made or how
/// many siblings were derived before it.
///
/// Streams are single-owner; hand one derived stream to each parallel task.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() noexcept;

    friend bool operator==(const RngStream&, const RngStream&) = default;

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::array<std::uint64_t, 4> state_;
};

/// SplitMix64 finalizer; also the stream-index mixing function.
std::uint64_t mix64(std::uint64_t x) noexcept;

RngStream make_rng(std::uint64_t seed);

/// Child origin is (parent.seed, mix64(parent.stream_index + 0x9e3779b97f4a7c15 * (index + 1))).
RngStream derive_stream(const RngStream& parent, std::uint64_t index);

/// Marsaglia polar method, one output per accepted pair.
double draw_standard_normal(RngStream& rng);

/// Uniform in [lo, hi]; returns lo when lo == hi. Throws invalid_range if lo > hi.
double draw_uniform(RngStream& rng, double lo, double hi);

/// Uniform integer in [0, n). n must be positive.
std::uint64_t draw_index(RngStream& rng, std::uint64_t n);

/// psi distinct indices from [0, n), uniformly without replacement, via a
/// sparse partial Fisher-Yates shuffle (O(psi) extra memory).
std::vector<std::size_t> subsample_indices(RngStream& rng, std::size_t n, std::size_t psi);

/// Copies psi rows chosen by subsample_indices(), in draw order.
Dataset subsample(RngStream& rng, const Dataset& data, std::size_t psi);

} // namespace eif
