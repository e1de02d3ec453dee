#include "eif/synth.hpp"

#include <cmath>
#include <string>

#include "eif/error.hpp"
#include "eif/rng.hpp"

namespace eif {

namespace {

void require_count(std::size_t n, const char* what) {
    if (n == 0)
        fail(Errc::invalid_argument, std::string(what) + ": count must be at least 1");
}

} // namespace

Dataset gen_gaussian_blob(std::size_t n, std::size_t dim, std::span<const double> mean,
                          double sigma, std::uint64_t seed) {
    require_count(n, "gen_gaussian_blob");
    if (!(sigma > 0.0))
        fail(Errc::invalid_argument, "gen_gaussian_blob: sigma must be positive");
    if (!mean.empty())
        check_dimension(dim, mean.size());
    Dataset out(dim);
    out.reserve(n);
    RngStream rng = make_rng(seed);
    Point p(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d)
            p[d] = (mean.empty() ? 0.0 : mean[d]) + sigma * draw_standard_normal(rng);
        out.push_back(p);
    }
    return out;
}

Dataset gen_double_blob(std::size_t n_per_blob, std::uint64_t seed) {
    require_count(n_per_blob, "gen_double_blob");
    const double centers[2][2] = {{0.0, 10.0}, {10.0, 0.0}};
    Dataset out(2);
    out.reserve(2 * n_per_blob);
    RngStream rng = make_rng(seed);
    for (const auto& c : centers) {
        for (std::size_t i = 0; i < n_per_blob; ++i) {
            const double x = c[0] + draw_standard_normal(rng);
            const double y = c[1] + draw_standard_normal(rng);
            const double pt[2] = {x, y};
            out.push_back(pt);
        }
    }
    return out;
}

Dataset gen_sinusoid(std::size_t n, double amplitude, double x_max, double noise_sigma,
                     std::uint64_t seed) {
    require_count(n, "gen_sinusoid");
    if (!(amplitude > 0.0) || !(x_max > 0.0) || !(noise_sigma >= 0.0))
        fail(Errc::invalid_argument,
             "gen_sinusoid: need amplitude > 0, x_max > 0 and noise_sigma >= 0");
    Dataset out(2);
    out.reserve(n);
    RngStream rng = make_rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = draw_uniform(rng, 0.0, x_max);
        const double noise = draw_standard_normal(rng);
        const double y = noise_sigma == 0.0 ? amplitude * std::sin(x)
                                            : amplitude * std::sin(x) + noise_sigma * noise;
        const double pt[2] = {x, y};
        out.push_back(pt);
    }
    return out;
}

Dataset gen_sphere_levelset(double radius, std::size_t n, std::size_t dim, std::uint64_t seed) {
    require_count(n, "gen_sphere_levelset");
    if (dim < 2)
        fail(Errc::invalid_argument, "gen_sphere_levelset: dimension must be at least 2");
    if (!(radius >= 0.0))
        fail(Errc::invalid_argument, "gen_sphere_levelset: radius must be non-negative");
    Dataset out(dim);
    out.reserve(n);
    RngStream rng = make_rng(seed);
    Point p(dim);
    for (std::size_t i = 0; i < n; ++i) {
        double norm = 0.0;
        while (norm == 0.0) {
            double sq = 0.0;
            for (auto& v : p) {
                v = draw_standard_normal(rng);
                sq += v * v;
            }
            norm = std::sqrt(sq);
        }
        for (auto& v : p)
            v = radius * (v / norm);
        out.push_back(p);
    }
    return out;
}

Dataset gen_line_levelset(double offset, std::size_t n, double amplitude, double x_max,
                          std::uint64_t seed) {
    require_count(n, "gen_line_levelset");
    if (!(x_max >= 0.0))
        fail(Errc::invalid_argument, "gen_line_levelset: x_max must be non-negative");
    Dataset out(2);
    out.reserve(n);
    RngStream rng = make_rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = draw_uniform(rng, 0.0, x_max);
        const double pt[2] = {x, amplitude * std::sin(x) + offset};
        out.push_back(pt);
    }
    return out;
}

Dataset gen_anomalies_uniform_box(std::size_t n, std::span<const double> lo,
                                  std::span<const double> hi, std::uint64_t seed) {
    require_count(n, "gen_anomalies_uniform_box");
    if (lo.empty() || lo.size() != hi.size())
        fail(Errc::invalid_argument, "gen_anomalies_uniform_box: lo and hi must share a dimension");
    for (std::size_t d = 0; d < lo.size(); ++d)
        if (!(lo[d] < hi[d]))
            fail(Errc::invalid_argument, "gen_anomalies_uniform_box: need lo < hi in coordinate " +
                                             std::to_string(d));
    Dataset out(lo.size());
    out.reserve(n);
    RngStream rng = make_rng(seed);
    Point p(lo.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < p.size(); ++d)
            p[d] = draw_uniform(rng, lo[d], hi[d]);
        out.push_back(p);
    }
    return out;
}

NominalRegion within_radius_of(std::vector<Point> centers, double radius) {
    return [centers = std::move(centers), r2 = radius * radius](std::span<const double> x) {
        for (const auto& c : centers) {
            double sq = 0.0;
            for (std::size_t d = 0; d < x.size(); ++d)
                sq += (x[d] - c[d]) * (x[d] - c[d]);
            if (sq < r2)
                return true;
        }
        return false;
    };
}

NominalRegion within_band_of_sinusoid(double amplitude, double half_width) {
    return [=](std::span<const double> x) {
        return std::abs(x[1] - amplitude * std::sin(x[0])) < half_width;
    };
}

Dataset inject_anomalies(std::size_t n, const Dataset& training, const NominalRegion& nominal,
                         std::uint64_t seed) {
    require_count(n, "inject_anomalies");
    if (training.empty())
        fail(Errc::insufficient_data, "inject_anomalies: empty training set");
    const std::size_t dim = training.dim();
    Point lo(training.row(0).begin(), training.row(0).end());
    Point hi = lo;
    for (std::size_t i = 1; i < training.size(); ++i)
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], training.row(i)[d]);
            hi[d] = std::max(hi[d], training.row(i)[d]);
        }
    for (std::size_t d = 0; d < dim; ++d) {
        const double center = 0.5 * (lo[d] + hi[d]);
        const double half = 0.5 * (hi[d] - lo[d]);
        lo[d] = center - 1.5 * half;
        hi[d] = center + 1.5 * half;
    }

    Dataset out(dim);
    out.reserve(n);
    RngStream rng = make_rng(seed);
    Point p(dim);
    const std::size_t max_attempts = 10000 * n;
    for (std::size_t attempt = 0; out.size() < n; ++attempt) {
        if (attempt == max_attempts)
            fail(Errc::invalid_argument,
                 "inject_anomalies: the nominal region covers nearly the whole sampling box");
        for (std::size_t d = 0; d < dim; ++d)
            p[d] = draw_uniform(rng, lo[d], hi[d]);
        if (!nominal || !nominal(p))
            out.push_back(p);
    }
    return out;
}

GeneratorKind parse_generator_kind(std::string_view name) {
    if (name == "blob") return GeneratorKind::blob;
    if (name == "double_blob") return GeneratorKind::double_blob;
    if (name == "sinusoid") return GeneratorKind::sinusoid;
    if (name == "sphere" || name == "sphere_levelset") return GeneratorKind::sphere_levelset;
    if (name == "line" || name == "line_levelset") return GeneratorKind::line_levelset;
    if (name == "uniform_box") return GeneratorKind::uniform_box;
    fail(Errc::invalid_argument, "unknown generator kind '" + std::string(name) + "'");
}

Dataset generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
    case GeneratorKind::blob:
        return gen_gaussian_blob(spec.n, spec.dim, spec.mean, spec.sigma, spec.seed);
    case GeneratorKind::double_blob:
        return gen_double_blob(spec.n, spec.seed);
    case GeneratorKind::sinusoid:
        return gen_sinusoid(spec.n, spec.amplitude, spec.x_max, spec.noise_sigma, spec.seed);
    case GeneratorKind::sphere_levelset:
        return gen_sphere_levelset(spec.radius, spec.n, spec.dim, spec.seed);
    case GeneratorKind::line_levelset:
        return gen_line_levelset(spec.offset, spec.n, spec.amplitude, spec.x_max, spec.seed);
    case GeneratorKind::uniform_box:
        return gen_anomalies_uniform_box(spec.n, spec.lo, spec.hi, spec.seed);
    }
    fail(Errc::invalid_argument, "unknown generator kind");
}

} // namespace eif
