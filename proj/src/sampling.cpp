#include "pairscatter/sampling.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

namespace pairscatter::sampling {

using kinematics::big_f;
using kinematics::big_g;
using kinematics::PolarCosine;
using models::normalize_azimuth;

namespace {

constexpr double kSafety = 1.0 + 1e-9;
constexpr double kFeasibilityTolerance = -1e-12;

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream)
{
    return std::seed_seq{
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(stream >> 32),
    };
}

double orth_shift(const PolarizationFrame& frame)
{
    return frame.orth_sign == OrthSign::Plus ? kPi / 2.0 : -kPi / 2.0;
}

// chi uniform on [-1, 1), phi uniform on [0, 2 pi).
ScatterAngles propose(RandomStream& rng)
{
    const double chi = 2.0 * rng.uniform() - 1.0;
    const double phi = kTwoPi * rng.uniform();
    return {chi, phi};
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index)
{
    auto seq = make_seed_seq(seed, stream_index);
    engine_.seed(seq);
}

double to_fixed_frame(double phi, const PolarizationFrame& frame, Photon which)
{
    double shifted = phi + frame.big_phi;
    if (which == Photon::Second)
        shifted += orth_shift(frame);
    return normalize_azimuth(shifted);
}

double to_polarization_frame(double varphi, const PolarizationFrame& frame,
                             Photon which)
{
    double shifted = varphi - frame.big_phi;
    if (which == Photon::Second)
        shifted -= orth_shift(frame);
    return normalize_azimuth(shifted);
}

PairEvent PairEvent::from_polarization(const PolarizationFrame& frame,
                                       const ScatterAngles& photon1,
                                       const ScatterAngles& photon2)
{
    return {frame, photon1, photon2,
            to_fixed_frame(photon1.phi(), frame, Photon::First),
            to_fixed_frame(photon2.phi(), frame, Photon::Second)};
}

PairEvent PairEvent::from_fixed(const PolarizationFrame& frame,
                                const ScatterAngles& fixed1,
                                const ScatterAngles& fixed2)
{
    return {frame,
            {fixed1.chi(),
             to_polarization_frame(fixed1.phi(), frame, Photon::First)},
            {fixed2.chi(),
             to_polarization_frame(fixed2.phi(), frame, Photon::Second)},
            fixed1.phi(), fixed2.phi()};
}

PolarizationFrame sample_frame(RandomStream& rng)
{
    PolarizationFrame frame;
    frame.big_phi = kTwoPi * rng.uniform();
    frame.orth_sign = rng.coin() ? OrthSign::Plus : OrthSign::Minus;
    return frame;
}

ScatterAngles sample_kn(RandomStream& rng, RejectionStats* stats)
{
    // F - G cos 2phi <= F + G <= 2.
    constexpr double envelope = kinematics::kMaxF * kSafety;
    RejectionStats local;
    while (true)
    {
        ++local.proposals;
        const auto candidate = propose(rng);
        if (rng.uniform() * envelope < models::kn_bracket(candidate))
        {
            ++local.accepted;
            if (stats)
                *stats += local;
            return candidate;
        }
    }
}

ScatterAngles sample_pw_conditional(RandomStream& rng,
                                    const ScatterAngles& fixed1,
                                    RejectionStats* stats)
{
    // F1 F2 - G1 G2 cos 2(phi2 - phi1) <= 2 F1 + G1 / 3.
    const double f1 = big_f(fixed1.chi());
    const double g1 = big_g(fixed1.chi());
    const double envelope =
        (kinematics::kMaxF * f1 + kinematics::kMaxG * g1) * kSafety;
    RejectionStats local;
    while (true)
    {
        ++local.proposals;
        const auto candidate = propose(rng);
        if (rng.uniform() * envelope < models::pw_bracket(fixed1, candidate))
        {
            ++local.accepted;
            if (stats)
                *stats += local;
            return candidate;
        }
    }
}

ScatterAngles sample_recommended_conditional(RandomStream& rng,
                                             const ScatterAngles& photon1,
                                             RejectionStats* stats)
{
    // The bracket is bounded by (F1 + G1)(F2 + G2) <= 2 (F1 + G1).
    const double envelope =
        kinematics::kMaxF
        * (big_f(photon1.chi()) + big_g(photon1.chi())) * kSafety;
    RejectionStats local;
    while (true)
    {
        ++local.proposals;
        const auto candidate = propose(rng);
        if (rng.uniform() * envelope
            < models::recommended_bracket(photon1, candidate))
        {
            ++local.accepted;
            if (stats)
                *stats += local;
            return candidate;
        }
    }
}

void require_feasible(const ModelSpec& model)
{
    if (model.kind != models::ModelKind::AnsatzFamily)
        return;
    if (!std::isfinite(model.b_ff) || !std::isfinite(model.b_gg))
        throw std::invalid_argument("ansatz coefficients must be finite");

    static std::mutex mutex;
    static std::map<std::pair<double, double>, bool> cache;

    const auto key = std::make_pair(model.b_ff, model.b_gg);
    bool feasible;
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(key);
        if (it == cache.end())
        {
            feasible = models::grid_minimum(model) >= kFeasibilityTolerance;
            cache.emplace(key, feasible);
        }
        else
        {
            feasible = it->second;
        }
    }
    if (!feasible)
        throw std::invalid_argument(
            "ansatz coefficients give a negative density");
}

PairSampler::PairSampler(const ModelSpec& model, Scheme scheme)
    : model_(model), scheme_(scheme)
{
    using models::ModelKind;
    if (scheme == Scheme::Staged && model.kind != ModelKind::KnIndependent
        && model.kind != ModelKind::PwFixedFrame
        && model.kind != ModelKind::Recommended)
    {
        throw std::invalid_argument(
            "staged sampling is defined for kn-independent, pw and "
            "recommended models only");
    }
    require_feasible(model);
    envelope_ = model.kind == ModelKind::AnsatzFamily
                    ? models::density_upper_bound(model) * kSafety
                    : 4.0 * kSafety;
}

PairEvent PairSampler::operator()(RandomStream& rng)
{
    return scheme_ == Scheme::Joint ? joint(rng) : staged(rng);
}

PairEvent PairSampler::joint(RandomStream& rng)
{
    using models::ModelKind;
    const auto frame = sample_frame(rng);

    if (model_.kind == ModelKind::KnIndependent)
    {
        const auto a1 = sample_kn(rng, &stats_);
        const auto a2 = sample_kn(rng, &stats_);
        return PairEvent::from_polarization(frame, a1, a2);
    }

    while (true)
    {
        ++stats_.proposals;
        const auto a1 = propose(rng);
        const auto a2 = propose(rng);
        const double u = rng.uniform() * envelope_;
        double value = 0.0;
        switch (model_.kind)
        {
        case ModelKind::PwFixedFrame:
            value = models::pw_bracket(a1, a2);
            break;
        case ModelKind::NaivePhi: value = models::naive_bracket(a1, a2); break;
        case ModelKind::Recommended:
            value = models::recommended_bracket(a1, a2);
            break;
        case ModelKind::AnsatzFamily:
            value = models::ansatz_density(a1, a2, model_.b_ff, model_.b_gg);
            break;
        case ModelKind::KnIndependent: break;
        }
        if (u < value)
        {
            ++stats_.accepted;
            if (model_.kind == ModelKind::PwFixedFrame)
                return PairEvent::from_fixed(frame, a1, a2);
            return PairEvent::from_polarization(frame, a1, a2);
        }
    }
}

PairEvent PairSampler::staged(RandomStream& rng)
{
    using models::ModelKind;
    const auto frame = sample_frame(rng);
    const auto photon1 = sample_kn(rng, &stats_);

    switch (model_.kind)
    {
    case ModelKind::PwFixedFrame:
    {
        const ScatterAngles fixed1{
            photon1.chi(), to_fixed_frame(photon1.phi(), frame, Photon::First)};
        const auto fixed2 = sample_pw_conditional(rng, fixed1, &stats_);
        return PairEvent::from_fixed(frame, fixed1, fixed2);
    }
    case ModelKind::Recommended:
    {
        const auto photon2 =
            sample_recommended_conditional(rng, photon1, &stats_);
        return PairEvent::from_polarization(frame, photon1, photon2);
    }
    default:
    {
        const auto photon2 = sample_kn(rng, &stats_);
        return PairEvent::from_polarization(frame, photon1, photon2);
    }
    }
}

PairEvent sample_joint(RandomStream& rng, const ModelSpec& model,
                       RejectionStats* stats)
{
    PairSampler sampler(model, Scheme::Joint);
    auto event = sampler(rng);
    if (stats)
        *stats += sampler.stats();
    return event;
}

PipelineResult run_pipeline(const ModelSpec& model, Scheme scheme,
                            std::size_t n, std::uint64_t seed,
                            unsigned workers)
{
    if (n == 0)
        throw std::invalid_argument("run_pipeline: n must be at least 1");
    if (workers == 0)
        throw std::invalid_argument("run_pipeline: workers must be at least 1");

    // Validate up front so worker threads never throw.
    PairSampler probe(model, scheme);

    struct Partition
    {
        std::vector<PairEvent> events;
        RejectionStats stats;
    };
    std::vector<Partition> parts(workers);

    auto fill = [&](unsigned p) {
        const std::size_t count =
            n / workers + (p < n % workers ? 1 : 0);
        RandomStream rng(seed, p);
        PairSampler sampler(model, scheme);
        auto& out = parts[p].events;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(sampler(rng));
        parts[p].stats = sampler.stats();
    };

    if (workers == 1)
    {
        fill(0);
    }
    else
    {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned p = 0; p < workers; ++p)
            threads.emplace_back(fill, p);
        for (auto& t : threads)
            t.join();
    }

    PipelineResult result;
    if (workers == 1)
    {
        result.events = std::move(parts[0].events);
        result.stats = parts[0].stats;
        return result;
    }
    result.events.reserve(n);
    for (auto& part : parts)
    {
        result.events.insert(result.events.end(), part.events.begin(),
                             part.events.end());
        result.stats += part.stats;
    }
    return result;
}

} // namespace pairscatter::sampling
