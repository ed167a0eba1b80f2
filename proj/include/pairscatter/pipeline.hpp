#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairscatter/analysis.hpp"
#include "pairscatter/io.hpp"
#include "pairscatter/sampling.hpp"

// Named pipelines as exposed on the command line, and the drivers that turn
// their samples into histograms and estimates.
namespace pairscatter::pipeline {

struct Pipeline
{
    std::string name;
    models::ModelSpec model;
    sampling::Scheme scheme = sampling::Scheme::Joint;
    //! Closed-form azimuthal marginal of the pipeline's output.
    analysis::MarginalKind marginal = analysis::MarginalKind::Recommended;
};

//! kn-independent, pw-direct, pw-joint, naive-phi, recommended, ansatz.
const std::vector<std::string>& names();

//! Throws std::invalid_argument for unknown names, for ansatz without both
//! coefficients, and for coefficients given to any other pipeline.
Pipeline parse(std::string_view name, std::optional<double> b_ff = {},
               std::optional<double> b_gg = {});

struct RunConfig
{
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::size_t bins = 64;
    sampling::Photon photon = sampling::Photon::Second;
};

struct MarginalOutput
{
    analysis::Histogram histogram;
    io::Summary summary;
};

/*!
 * Samples the pipeline and bins the chosen photon's polarization-relative
 * azimuth. The summary carries both photons' k estimates, the analytic k, and
 * the chi-square against the analytic curve when every bin expects at least
 * five counts.
 */
MarginalOutput marginals(const Pipeline& p, const RunConfig& cfg);

//! Marginal output for events already drawn from pipeline p.
MarginalOutput marginals(const Pipeline& p, const RunConfig& cfg,
                         std::span<const sampling::PairEvent> events,
                         const sampling::RejectionStats& stats);

/*!
 * Moment estimates from a sample: k for each photon and the pair correlation
 * 2 mean cos 2(phi2 - phi1), in polarization-relative and fixed-frame
 * azimuths, each with its standard error.
 */
io::Summary fit(std::span<const sampling::PairEvent> events);

} // namespace pairscatter::pipeline
