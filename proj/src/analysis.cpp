#include "pairscatter/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "pairscatter/quadrature.hpp"

namespace pairscatter::analysis {

namespace {

constexpr double kFeasibilityTolerance = -1e-12;

double chi2_p_value(double chi2, std::size_t dof)
{
    if (dof == 0)
        return 1.0;
    return boost::math::gamma_q(0.5 * static_cast<double>(dof), 0.5 * chi2);
}

std::string lowercase(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<double> linspace(Range r, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        out[i] = n == 1 ? r.lo
                        : r.lo
                              + (r.hi - r.lo) * static_cast<double>(i)
                                    / static_cast<double>(n - 1);
    }
    if (n > 1)
        out.back() = r.hi;
    return out;
}

} // namespace

ModulationEstimate scaled_cos2_mean(std::span<const double> angles,
                                    double scale)
{
    if (angles.size() < 2)
        throw std::invalid_argument("need at least two samples");
    // Welford accumulation of cos 2x.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    for (double x : angles)
    {
        const double c = std::cos(2.0 * x);
        ++count;
        const double delta = c - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (c - mean);
    }
    const double n = static_cast<double>(count);
    const double variance = m2 / (n - 1.0);
    return {scale * mean, std::abs(scale) * std::sqrt(variance / n), count};
}

ModulationEstimate estimate_modulation(std::span<const double> phis)
{
    return scaled_cos2_mean(phis, -2.0);
}

MarginalKind parse_marginal_kind(std::string_view name)
{
    const std::string s = lowercase(name);
    if (s == "kn+kn" || s == "kn-independent")
        return MarginalKind::KnKn;
    if (s == "kn+pw" || s == "pw-direct")
        return MarginalKind::KnPw;
    if (s == "pw+pw" || s == "pw-joint")
        return MarginalKind::PwPw;
    if (s == "recommended")
        return MarginalKind::Recommended;
    throw std::invalid_argument("unknown marginal kind: " + std::string(name));
}

double analytic_marginal(MarginalKind kind, sampling::Photon which)
{
    const auto& k = kinematics::constants();
    switch (kind)
    {
    case MarginalKind::KnKn:
    case MarginalKind::Recommended: return k.ratio;
    case MarginalKind::KnPw:
        // The first photon keeps its Klein-Nishina form.
        return which == sampling::Photon::First ? k.ratio : k.lambda * k.ratio;
    case MarginalKind::PwPw: return 0.0;
    }
    throw std::invalid_argument("unknown marginal kind");
}

Histogram::Histogram(std::vector<double> edges) : edges_(std::move(edges))
{
    if (edges_.size() < 2)
        throw std::invalid_argument("histogram needs at least two edges");
    for (std::size_t i = 1; i < edges_.size(); ++i)
    {
        if (!(edges_[i] > edges_[i - 1]))
            throw std::invalid_argument("histogram edges must be increasing");
    }
    counts_.assign(edges_.size() - 1, 0);
}

Histogram Histogram::uniform(double lo, double hi, std::size_t bins)
{
    if (bins == 0)
        throw std::invalid_argument("histogram needs at least one bin");
    auto edges = linspace({lo, hi}, bins + 1);
    return Histogram(std::move(edges));
}

void Histogram::fill(double x) noexcept
{
    if (!(x >= edges_.front() && x < edges_.back()))
    {
        ++out_of_range_;
        return;
    }
    auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    const auto bin = static_cast<std::size_t>(it - edges_.begin()) - 1;
    ++counts_[std::min(bin, counts_.size() - 1)];
}

std::uint64_t Histogram::total() const noexcept
{
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

void Histogram::set_analytic(std::vector<double> masses)
{
    if (masses.size() != counts_.size())
        throw std::invalid_argument("analytic column size mismatch");
    analytic_ = std::move(masses);
}

double select_azimuth(const sampling::PairEvent& event,
                      AzimuthSelector selector) noexcept
{
    switch (selector)
    {
    case AzimuthSelector::Photon1: return event.photon1.phi();
    case AzimuthSelector::Photon2: return event.photon2.phi();
    case AzimuthSelector::Fixed1: return event.fixed1_phi;
    case AzimuthSelector::Fixed2: return event.fixed2_phi;
    }
    return 0.0;
}

std::vector<double> collect_azimuths(std::span<const sampling::PairEvent> events,
                                     AzimuthSelector selector)
{
    std::vector<double> out;
    out.reserve(events.size());
    for (const auto& e : events)
        out.push_back(select_azimuth(e, selector));
    return out;
}

std::vector<double> bin_masses(const std::vector<double>& edges,
                               const std::function<double(double)>& pdf)
{
    std::vector<double> out;
    out.reserve(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        out.push_back(quadrature::adaptive(pdf, edges[i], edges[i + 1], 1e-12)
                          .value);
    return out;
}

std::vector<double> modulation_bin_masses(const std::vector<double>& edges,
                                          double k)
{
    // Antiderivative of (1/2pi)(1 - k cos 2phi).
    auto cdf = [k](double phi) {
        return (phi - 0.5 * k * std::sin(2.0 * phi)) / kTwoPi;
    };
    std::vector<double> out;
    out.reserve(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        out.push_back(cdf(edges[i + 1]) - cdf(edges[i]));
    return out;
}

Histogram histogram_phi(std::span<const sampling::PairEvent> events,
                        AzimuthSelector selector, std::size_t bins,
                        std::optional<double> k)
{
    if (bins < 2)
        throw std::invalid_argument("histogram_phi: bins must be >= 2");
    auto h = Histogram::uniform(0.0, kTwoPi, bins);
    for (const auto& e : events)
        h.fill(select_azimuth(e, selector));
    if (k)
        h.set_analytic(modulation_bin_masses(h.edges(), *k));
    return h;
}

ChiSquare chi_square(const Histogram& h, double min_expected)
{
    if (!h.analytic())
        throw std::invalid_argument("chi_square: histogram has no analytic column");
    const auto& mass = *h.analytic();
    const double total = static_cast<double>(h.total());
    ChiSquare out;
    for (std::size_t i = 0; i < h.bins(); ++i)
    {
        const double expected = total * mass[i];
        if (!(expected >= min_expected))
            throw std::invalid_argument("chi_square: expected count below "
                                        + std::to_string(min_expected));
        const double diff = static_cast<double>(h.counts()[i]) - expected;
        out.chi2 += diff * diff / expected;
    }
    out.dof = h.bins() - 1;
    out.reduced = out.chi2 / static_cast<double>(out.dof);
    out.p_value = chi2_p_value(out.chi2, out.dof);
    return out;
}

ChiSquare chi_square_two_sample(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b)
{
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("chi_square_two_sample: size mismatch");
    const double na = std::accumulate(a.begin(), a.end(), 0.0);
    const double nb = std::accumulate(b.begin(), b.end(), 0.0);
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("chi_square_two_sample: empty sample");
    const double wa = std::sqrt(nb / na);
    const double wb = std::sqrt(na / nb);

    ChiSquare out;
    std::size_t used = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const double x = static_cast<double>(a[i]);
        const double y = static_cast<double>(b[i]);
        if (x + y == 0.0)
            continue;
        ++used;
        const double d = wa * x - wb * y;
        out.chi2 += d * d / (x + y);
    }
    out.dof = na == nb ? used - 1 : used;
    out.reduced = out.dof ? out.chi2 / static_cast<double>(out.dof) : 0.0;
    out.p_value = chi2_p_value(out.chi2, out.dof);
    return out;
}

std::vector<std::uint64_t>
histogram_phi_pair(std::span<const sampling::PairEvent> events,
                   std::size_t bins)
{
    if (bins == 0)
        throw std::invalid_argument("histogram_phi_pair: bins must be >= 1");
    std::vector<std::uint64_t> out(bins * bins, 0);
    const double scale = static_cast<double>(bins) / kTwoPi;
    auto index = [&](double phi) {
        return std::min(static_cast<std::size_t>(phi * scale), bins - 1);
    };
    for (const auto& e : events)
        ++out[index(e.photon1.phi()) * bins + index(e.photon2.phi())];
    return out;
}

double reduced_density(models::ModelKind kind, double phi1, double phi2)
{
    const double r = kinematics::constants().ratio;
    const double base = 1.0 + r * r * std::cos(2.0 * (phi2 - phi1));
    const double norm = kTwoPi * kTwoPi;
    switch (kind)
    {
    case models::ModelKind::NaivePhi: return base / norm;
    case models::ModelKind::Recommended:
        return (base - r * (std::cos(2.0 * phi1) + std::cos(2.0 * phi2)))
               / norm;
    default:
        throw std::invalid_argument(
            "reduced_2d supports naive-phi and recommended only");
    }
}

double ReducedGrid::max() const
{
    return *std::max_element(values.begin(), values.end());
}

double ReducedGrid::mean() const
{
    return std::accumulate(values.begin(), values.end(), 0.0)
           / static_cast<double>(values.size());
}

ReducedGrid reduced_2d(models::ModelKind kind, std::size_t n1, std::size_t n2)
{
    if (n1 == 0 || n2 == 0)
        throw std::invalid_argument("reduced_2d: empty grid");
    ReducedGrid grid{n1, n2, std::vector<double>(n1 * n2)};
    const double scale = kTwoPi * kTwoPi;
    for (std::size_t i = 0; i < n1; ++i)
    {
        const double phi1 =
            kTwoPi * static_cast<double>(i) / static_cast<double>(n1);
        for (std::size_t j = 0; j < n2; ++j)
        {
            const double phi2 =
                kTwoPi * static_cast<double>(j) / static_cast<double>(n2);
            grid.values[i * n2 + j] = scale * reduced_density(kind, phi1, phi2);
        }
    }
    return grid;
}

std::size_t FeasibilityMap::feasible_count() const
{
    return static_cast<std::size_t>(
        std::count(feasible.begin(), feasible.end(), true));
}

FeasibilityMap scan_ansatz(Range b_ff, Range b_gg, std::size_t resolution,
                           const models::AngularGrid& grid, unsigned workers)
{
    for (double v : {b_ff.lo, b_ff.hi, b_gg.lo, b_gg.hi})
    {
        if (!std::isfinite(v))
            throw std::invalid_argument("scan_ansatz: ranges must be finite");
    }
    if (resolution == 0)
        throw std::invalid_argument("scan_ansatz: resolution must be >= 1");
    workers = std::max(workers, 1u);

    FeasibilityMap map;
    map.b_ff = linspace(b_ff, resolution);
    map.b_gg = linspace(b_gg, resolution);
    const std::size_t cells = resolution * resolution;
    map.min_density.assign(cells, 0.0);

    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < resolution; i += workers)
        {
            for (std::size_t j = 0; j < resolution; ++j)
            {
                map.min_density[map.index(i, j)] = models::grid_minimum(
                    models::ModelSpec::ansatz(map.b_ff[i], map.b_gg[j]), grid);
            }
        }
    };
    if (workers == 1)
    {
        work(0);
    }
    else
    {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w)
            threads.emplace_back(work, w);
        for (auto& t : threads)
            t.join();
    }

    map.feasible.resize(cells);
    for (std::size_t c = 0; c < cells; ++c)
        map.feasible[c] = map.min_density[c] >= kFeasibilityTolerance;
    return map;
}

} // namespace pairscatter::analysis
