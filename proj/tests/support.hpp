#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>

#include "pairscatter/kinematics.hpp"
#include "pairscatter/models.hpp"
#include "pairscatter/pipeline.hpp"
#include "pairscatter/quadrature.hpp"
#include "pairscatter/sampling.hpp"

namespace testsupport {

namespace ps = pairscatter;

// Large runs shared between test cases; keyed on pipeline name, n and seed.
inline const ps::sampling::PipelineResult&
cached_run(const std::string& name, std::size_t n, std::uint64_t seed)
{
    static std::map<std::tuple<std::string, std::size_t, std::uint64_t>,
                    ps::sampling::PipelineResult>
        cache;
    const auto key = std::make_tuple(name, n, seed);
    auto it = cache.find(key);
    if (it == cache.end())
    {
        const auto p = ps::pipeline::parse(name);
        it = cache.emplace(key, ps::sampling::run_pipeline(p.model, p.scheme, n,
                                                           seed))
                 .first;
    }
    return it->second;
}

// Random angles for spot checks; independent of the library's RandomStream.
struct AngleSource
{
    explicit AngleSource(std::uint64_t seed) : engine(seed) {}

    double chi() { return std::uniform_real_distribution<>(-1.0, 1.0)(engine); }
    double phi()
    {
        return std::uniform_real_distribution<>(0.0, ps::kTwoPi)(engine);
    }
    ps::models::ScatterAngles angles() { return {chi(), phi()}; }

    std::mt19937_64 engine;
};

// Integral of f(chi, phi) over one photon's full domain: 30-point
// Gauss-Legendre in chi, periodic rule in phi (exact for the cos 2phi
// harmonics every density here contains).
template <class Func>
double integrate_photon(Func&& f, std::size_t phi_nodes = 16)
{
    return ps::quadrature::gauss_legendre(
        [&](double chi) {
            return ps::quadrature::periodic(
                [&](double phi) { return f(chi, phi); }, ps::kTwoPi, phi_nodes);
        },
        -1.0, 1.0);
}

} // namespace testsupport
