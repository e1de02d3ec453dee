#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>

#include "eif/dataset.hpp"

namespace eif {

inline constexpr double kDefaultSinAmplitude = 5.0;
inline constexpr double kDefaultSinXMax = 12.566370614359172;  // 4 pi
inline constexpr double kDefaultSinNoise = 0.5;

Dataset gen_gaussian_blob(std::size_t n, std::size_t dim, std::span<const double> mean,
                          double sigma, std::uint64_t seed);

/// n_per_blob unit-variance points around (0, 10), then n_per_blob around (10, 0).
Dataset gen_double_blob(std::size_t n_per_blob, std::uint64_t seed);

/// x ~ U[0, x_max], y = amplitude sin(x) + N(0, noise_sigma^2).
Dataset gen_sinusoid(std::size_t n, double amplitude, double x_max, double noise_sigma,
                     std::uint64_t seed);

/// Points uniform on the sphere of the given radius (normalized Gaussian draws).
Dataset gen_sphere_levelset(double radius, std::size_t n, std::size_t dim, std::uint64_t seed);

/// x ~ U[0, x_max], y = amplitude sin(x) + offset, noiseless.
Dataset gen_line_levelset(double offset, std::size_t n, double amplitude, double x_max,
                          std::uint64_t seed);

Dataset gen_anomalies_uniform_box(std::size_t n, std::span<const double> lo,
                                  std::span<const double> hi, std::uint64_t seed);

/// Returns true for points that lie inside the nominal region and must be
/// rejected as anomaly candidates.
using NominalRegion = std::function<bool(std::span<const double>)>;

NominalRegion within_radius_of(std::vector<Point> centers, double radius);
NominalRegion within_band_of_sinusoid(double amplitude, double half_width);

/// Rejection-samples n anomalies uniformly from the training bounding box
/// scaled 1.5x about its center, discarding candidates inside `nominal`.
Dataset inject_anomalies(std::size_t n, const Dataset& training, const NominalRegion& nominal,
                         std::uint64_t seed);

enum class GeneratorKind { blob, double_blob, sinusoid, sphere_levelset, line_levelset, uniform_box };

GeneratorKind parse_generator_kind(std::string_view name);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::blob;
    std::size_t n = 1000;
    std::size_t dim = 2;
    std::vector<double> mean;  // blob; empty means the origin
    double sigma = 1.0;
    double amplitude = kDefaultSinAmplitude;
    double x_max = kDefaultSinXMax;
    double noise_sigma = kDefaultSinNoise;
    double radius = 1.0;
    double offset = 0.0;
    std::vector<double> lo;
    std::vector<double> hi;
    std::uint64_t seed = 1;
};

Dataset generate(const GeneratorSpec& spec);

} // namespace eif
