#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "pairscatter/models.hpp"

namespace pairscatter::sampling {

using models::ModelSpec;
using models::ScatterAngles;

/*!
 * Reproducible random stream.
 *
 * A 64-bit Mersenne Twister seeded through std::seed_seq from the four 32-bit
 * halves of (seed, stream_index). Both the engine and the seed_seq mixing are
 * fully specified by the standard, and uniform() converts the raw 64-bit
 * output itself, so sequences are identical across platforms and standard
 * libraries.
 */
class RandomStream
{
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_index);

    //! Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    //! Fair coin flip.
    bool coin() noexcept { return (engine_() >> 63) != 0; }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

enum class OrthSign
{
    Plus,  //!< second photon polarized at big_phi + pi/2
    Minus, //!< second photon polarized at big_phi - pi/2
};

//! Classically assumed initial polarizations of the pair.
struct PolarizationFrame
{
    double big_phi = 0.0; //!< first photon's polarization angle vs. x-axis
    OrthSign orth_sign = OrthSign::Plus;
};

enum class Photon
{
    First = 1,
    Second = 2,
};

//! Polarization-relative azimuth -> fixed-frame azimuth, in [0, 2 pi).
double to_fixed_frame(double phi, const PolarizationFrame& frame, Photon which);
//! Fixed-frame azimuth -> polarization-relative azimuth, in [0, 2 pi).
double to_polarization_frame(double varphi, const PolarizationFrame& frame,
                             Photon which);

//! Complete two-photon outcome. photon1/photon2 carry polarization-relative
//! azimuths; fixed1_phi/fixed2_phi the same azimuths in the fixed frame.
struct PairEvent
{
    PolarizationFrame frame;
    ScatterAngles photon1;
    ScatterAngles photon2;
    double fixed1_phi;
    double fixed2_phi;

    static PairEvent from_polarization(const PolarizationFrame& frame,
                                       const ScatterAngles& photon1,
                                       const ScatterAngles& photon2);
    static PairEvent from_fixed(const PolarizationFrame& frame,
                                const ScatterAngles& fixed1,
                                const ScatterAngles& fixed2);

    ScatterAngles fixed1() const { return {photon1.chi(), fixed1_phi}; }
    ScatterAngles fixed2() const { return {photon2.chi(), fixed2_phi}; }
};

struct RejectionStats
{
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;

    double acceptance() const noexcept
    {
        return proposals == 0 ? 0.0
                              : static_cast<double>(accepted)
                                    / static_cast<double>(proposals);
    }
    RejectionStats& operator+=(const RejectionStats& other) noexcept
    {
        proposals += other.proposals;
        accepted += other.accepted;
        return *this;
    }
};

//! Uniform big_phi in [0, 2 pi) and an independent fair sign.
PolarizationFrame sample_frame(RandomStream& rng);

//! Klein-Nishina (chi, phi), phi relative to the initial polarization.
ScatterAngles sample_kn(RandomStream& rng, RejectionStats* stats = nullptr);

//! Second photon's fixed-frame angles from the Pryce-Ward density conditioned
//! on the first photon's fixed-frame angles.
ScatterAngles sample_pw_conditional(RandomStream& rng,
                                    const ScatterAngles& fixed1,
                                    RejectionStats* stats = nullptr);

//! Second photon's polarization-relative angles from the recommended density
//! conditioned on the first photon.
ScatterAngles sample_recommended_conditional(RandomStream& rng,
                                             const ScatterAngles& photon1,
                                             RejectionStats* stats = nullptr);

enum class Scheme
{
    Joint,  //!< all four angles at once
    Staged, //!< first photon from Klein-Nishina, then the conditional
};

/*!
 * Draws pair events for one model and scheme.
 *
 * Joint sampling is 4D rejection against a constant envelope:
 * 4 (1 + 1e-9) for the bracket-form models, density_upper_bound() for the
 * ansatz family. Ansatz coefficients are checked once at construction and
 * rejected with std::invalid_argument if the density goes negative anywhere
 * on the verification grid (results cached per coefficient pair).
 *
 * Staged sampling is defined for KnIndependent, PwFixedFrame (the direct
 * Pryce-Ward procedure) and Recommended.
 *
 * Not shareable between threads; each thread should own a sampler.
 */
class PairSampler
{
  public:
    PairSampler(const ModelSpec& model, Scheme scheme);

    PairEvent operator()(RandomStream& rng);

    const RejectionStats& stats() const noexcept { return stats_; }
    const ModelSpec& model() const noexcept { return model_; }
    Scheme scheme() const noexcept { return scheme_; }

  private:
    PairEvent joint(RandomStream& rng);
    PairEvent staged(RandomStream& rng);

    ModelSpec model_;
    Scheme scheme_;
    double envelope_ = 0.0;
    RejectionStats stats_;
};

//! One jointly sampled event; see PairSampler.
PairEvent sample_joint(RandomStream& rng, const ModelSpec& model,
                       RejectionStats* stats = nullptr);

//! Throws std::invalid_argument unless the ansatz density is non-negative
//! (>= -1e-12) on the default verification grid. No-op for other kinds.
void require_feasible(const ModelSpec& model);

struct PipelineResult
{
    std::vector<PairEvent> events;
    RejectionStats stats;
};

/*!
 * Draws exactly n events, split over `workers` partitions. Partition p
 * receives stream index p and n / workers events (the first n % workers
 * partitions one more); results are concatenated in partition order, so the
 * output depends only on (model, scheme, n, seed, workers).
 */
PipelineResult run_pipeline(const ModelSpec& model, Scheme scheme,
                            std::size_t n, std::uint64_t seed,
                            unsigned workers = 1);

} // namespace pairscatter::sampling
