#include "eif/rng.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "eif/dataset.hpp"
#include "eif/error.hpp"

namespace eif {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix_next(std::uint64_t& x) noexcept {
    x += kGolden;
    return mix64(x);
}

} // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index) {
    std::uint64_t sm = seed ^ mix64(stream_index ^ 0x5851f42d4c957f2dULL);
    for (auto& word : state_)
        word = splitmix_next(sm);
    // xoshiro must not start from the all-zero state
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
        state_[0] = kGolden;
}

std::uint64_t RngStream::next_u64() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
}

double RngStream::next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RngStream make_rng(std::uint64_t seed) {
    return RngStream(seed, 0);
}

RngStream derive_stream(const RngStream& parent, std::uint64_t index) {
    return RngStream(parent.seed(), mix64(parent.stream_index() + kGolden * (index + 1)));
}

double draw_standard_normal(RngStream& rng) {
    double u, v, s;
    do {
        u = 2.0 * rng.next_unit() - 1.0;
        v = 2.0 * rng.next_unit() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
}

double draw_uniform(RngStream& rng, double lo, double hi) {
    if (!(lo <= hi))
        fail(Errc::invalid_range, "draw_uniform: lo > hi");
    if (lo == hi)
        return lo;
    const double v = lo + (hi - lo) * rng.next_unit();
    return v > hi ? hi : v;
}

std::uint64_t draw_index(RngStream& rng, std::uint64_t n) {
    if (n == 0)
        fail(Errc::invalid_argument, "draw_index: empty range");
    // reject the low band so every residue class is equally likely
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t r = rng.next_u64();
    while (r < threshold)
        r = rng.next_u64();
    return r % n;
}

std::vector<std::size_t> subsample_indices(RngStream& rng, std::size_t n, std::size_t psi) {
    if (psi == 0)
        fail(Errc::invalid_argument, "subsample: psi must be at least 1");
    if (psi > n)
        fail(Errc::insufficient_data, "subsample: psi = " + std::to_string(psi) +
                                          " exceeds the " + std::to_string(n) + " available rows");
    // Fisher-Yates over a virtual identity permutation; only displaced slots are stored.
    std::unordered_map<std::size_t, std::size_t> displaced;
    displaced.reserve(2 * psi);
    auto at = [&](std::size_t i) {
        auto it = displaced.find(i);
        return it == displaced.end() ? i : it->second;
    };
    std::vector<std::size_t> out(psi);
    for (std::size_t j = 0; j < psi; ++j) {
        const std::size_t k = j + draw_index(rng, n - j);
        const std::size_t picked = at(k);
        displaced[k] = at(j);
        out[j] = picked;
    }
    return out;
}

Dataset subsample(RngStream& rng, const Dataset& data, std::size_t psi) {
    const auto idx = subsample_indices(rng, data.size(), psi);
    Dataset out(data.dim());
    out.reserve(psi);
    for (auto i : idx)
        out.push_back(data.row(i));
    return out;
}

} // namespace eif
