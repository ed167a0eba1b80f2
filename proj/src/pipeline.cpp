#include "pairscatter/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace pairscatter::pipeline {

using analysis::AzimuthSelector;
using analysis::MarginalKind;
using models::ModelKind;
using models::ModelSpec;
using sampling::Photon;
using sampling::Scheme;

const std::vector<std::string>& names()
{
    static const std::vector<std::string> all{
        "kn-independent", "pw-direct", "pw-joint",
        "naive-phi",      "recommended", "ansatz"};
    return all;
}

Pipeline parse(std::string_view name, std::optional<double> b_ff,
               std::optional<double> b_gg)
{
    const std::string n(name);
    if (n == "ansatz")
    {
        if (!b_ff || !b_gg)
            throw std::invalid_argument("ansatz requires --bff and --bgg");
        // The extra terms integrate to zero against either photon, so the
        // marginals stay Klein-Nishina.
        return {n, ModelSpec::ansatz(*b_ff, *b_gg), Scheme::Joint,
                MarginalKind::Recommended};
    }
    if (b_ff || b_gg)
        throw std::invalid_argument("--bff/--bgg only apply to ansatz");
    if (n == "kn-independent")
        return {n, {ModelKind::KnIndependent}, Scheme::Joint, MarginalKind::KnKn};
    if (n == "pw-direct")
        return {n, {ModelKind::PwFixedFrame}, Scheme::Staged, MarginalKind::KnPw};
    if (n == "pw-joint")
        return {n, {ModelKind::PwFixedFrame}, Scheme::Joint, MarginalKind::PwPw};
    if (n == "naive-phi")
        return {n, {ModelKind::NaivePhi}, Scheme::Joint, MarginalKind::PwPw};
    if (n == "recommended")
        return {n, {ModelKind::Recommended}, Scheme::Joint,
                MarginalKind::Recommended};
    throw std::invalid_argument("unknown model: " + n);
}

MarginalOutput marginals(const Pipeline& p, const RunConfig& cfg)
{
    auto run = sampling::run_pipeline(p.model, p.scheme, cfg.samples, cfg.seed,
                                      cfg.workers);
    return marginals(p, cfg, run.events, run.stats);
}

MarginalOutput marginals(const Pipeline& p, const RunConfig& cfg,
                         std::span<const sampling::PairEvent> events,
                         const sampling::RejectionStats& stats)
{
    const auto selector = cfg.photon == Photon::First ? AzimuthSelector::Photon1
                                                      : AzimuthSelector::Photon2;
    const double k = analysis::analytic_marginal(p.marginal, cfg.photon);
    auto h = analysis::histogram_phi(events, selector, cfg.bins, k);

    const auto phi1 = analysis::collect_azimuths(events, AzimuthSelector::Photon1);
    const auto phi2 = analysis::collect_azimuths(events, AzimuthSelector::Photon2);
    const auto est1 = analysis::estimate_modulation(phi1);
    const auto est2 = analysis::estimate_modulation(phi2);
    const auto& chosen = cfg.photon == Photon::First ? est1 : est2;

    io::Summary s;
    s.set("model", p.name);
    if (p.model.kind == ModelKind::AnsatzFamily)
    {
        s.set("b_ff", p.model.b_ff);
        s.set("b_gg", p.model.b_gg);
    }
    s.set("seed", static_cast<std::int64_t>(cfg.seed));
    s.set("n", static_cast<std::int64_t>(events.size()));
    s.set("workers", static_cast<std::int64_t>(cfg.workers));
    s.set("photon", static_cast<std::int64_t>(cfg.photon));
    s.set("k_hat", chosen.k_hat);
    s.set("std_err", chosen.std_err);
    s.set("k_analytic", k);
    s.set("k_hat_1", est1.k_hat);
    s.set("std_err_1", est1.std_err);
    s.set("k_hat_2", est2.k_hat);
    s.set("std_err_2", est2.std_err);
    try
    {
        const auto chi = analysis::chi_square(h);
        s.set("chi2", chi.chi2);
        s.set("dof", static_cast<std::int64_t>(chi.dof));
        s.set("reduced_chi2", chi.reduced);
        s.set("p_value", chi.p_value);
    }
    catch (const std::invalid_argument&)
    {
        // Too few events per bin for a meaningful chi-square.
    }
    s.set("proposals", static_cast<std::int64_t>(stats.proposals));
    s.set("accepted", static_cast<std::int64_t>(stats.accepted));
    return {std::move(h), std::move(s)};
}

io::Summary fit(std::span<const sampling::PairEvent> events)
{
    std::vector<double> diff_pol;
    std::vector<double> diff_fixed;
    diff_pol.reserve(events.size());
    diff_fixed.reserve(events.size());
    for (const auto& e : events)
    {
        diff_pol.push_back(e.photon2.phi() - e.photon1.phi());
        diff_fixed.push_back(e.fixed2_phi - e.fixed1_phi);
    }
    const auto est1 = analysis::estimate_modulation(
        analysis::collect_azimuths(events, AzimuthSelector::Photon1));
    const auto est2 = analysis::estimate_modulation(
        analysis::collect_azimuths(events, AzimuthSelector::Photon2));
    const auto corr_pol = analysis::scaled_cos2_mean(diff_pol, 2.0);
    const auto corr_fixed = analysis::scaled_cos2_mean(diff_fixed, 2.0);

    io::Summary s;
    s.set("n", static_cast<std::int64_t>(events.size()));
    s.set("k_hat_1", est1.k_hat);
    s.set("std_err_1", est1.std_err);
    s.set("k_hat_2", est2.k_hat);
    s.set("std_err_2", est2.std_err);
    s.set("corr_polarization", corr_pol.k_hat);
    s.set("corr_polarization_err", corr_pol.std_err);
    s.set("corr_fixed", corr_fixed.k_hat);
    s.set("corr_fixed_err", corr_fixed.std_err);
    return s;
}

} // namespace pairscatter::pipeline
