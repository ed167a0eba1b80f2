#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pairscatter/models.hpp"
#include "pairscatter/sampling.hpp"

namespace pairscatter::analysis {

/*!
 * Moment estimate of k for an azimuthal density (1/2pi)(1 - k cos 2phi).
 *
 * E[cos 2phi] = -k/2, so k_hat = -2 mean(cos 2phi) with standard error
 * 2 sqrt(Var[cos 2phi] / n).
 */
struct ModulationEstimate
{
    double k_hat = 0.0;
    double std_err = 0.0;
    std::size_t n = 0;
};

//! Throws std::invalid_argument for fewer than two samples.
ModulationEstimate estimate_modulation(std::span<const double> phis);

//! Mean of cos 2(x) over the sample, times `scale`. Used for the pair
//! correlation statistics; std_err follows the same convention as above.
ModulationEstimate scaled_cos2_mean(std::span<const double> angles,
                                    double scale);

//! Pipelines with a closed-form azimuthal marginal.
enum class MarginalKind
{
    KnKn,        //!< both photons Klein-Nishina
    KnPw,        //!< direct Pryce-Ward sampling (KN first, then conditional)
    PwPw,        //!< joint Pryce-Ward sampling
    Recommended, //!< recommended density
};

//! Accepts "KN+KN", "KN+PW", "PW+PW", "Recommended" (case-insensitive) and
//! the CLI model names; throws std::invalid_argument otherwise.
MarginalKind parse_marginal_kind(std::string_view name);

//! Modulation coefficient k of the given photon's azimuthal marginal.
double analytic_marginal(MarginalKind kind,
                         sampling::Photon which = sampling::Photon::Second);

//! Binned counts over strictly increasing edges, with an optional analytic
//! column holding the model probability mass of each bin.
class Histogram
{
  public:
    explicit Histogram(std::vector<double> edges);
    static Histogram uniform(double lo, double hi, std::size_t bins);

    //! Adds x to its bin; values outside [front, back) are counted as
    //! out-of-range and otherwise ignored.
    void fill(double x) noexcept;

    std::size_t bins() const noexcept { return counts_.size(); }
    const std::vector<double>& edges() const noexcept { return edges_; }
    const std::vector<std::uint64_t>& counts() const noexcept
    {
        return counts_;
    }
    std::vector<std::uint64_t>& counts() noexcept { return counts_; }
    std::uint64_t total() const noexcept;
    std::uint64_t out_of_range() const noexcept { return out_of_range_; }

    const std::optional<std::vector<double>>& analytic() const noexcept
    {
        return analytic_;
    }
    void set_analytic(std::vector<double> masses);

    friend bool operator==(const Histogram&, const Histogram&) = default;

  private:
    std::vector<double> edges_;
    std::vector<std::uint64_t> counts_;
    std::optional<std::vector<double>> analytic_;
    std::uint64_t out_of_range_ = 0;
};

enum class AzimuthSelector
{
    Photon1, //!< polarization-relative azimuth of photon 1
    Photon2, //!< polarization-relative azimuth of photon 2
    Fixed1,  //!< fixed-frame azimuth of photon 1
    Fixed2,  //!< fixed-frame azimuth of photon 2
};

double select_azimuth(const sampling::PairEvent& event,
                      AzimuthSelector selector) noexcept;

std::vector<double> collect_azimuths(std::span<const sampling::PairEvent> events,
                                     AzimuthSelector selector);

//! Integral over each bin of a density on the real line (adaptive quadrature).
std::vector<double> bin_masses(const std::vector<double>& edges,
                               const std::function<double(double)>& pdf);

//! Closed-form bin masses of (1/2pi)(1 - k cos 2phi).
std::vector<double> modulation_bin_masses(const std::vector<double>& edges,
                                          double k);

//! Equal-width azimuth histogram over [0, 2pi). When `k` is given the
//! analytic column is filled from (1/2pi)(1 - k cos 2phi).
Histogram histogram_phi(std::span<const sampling::PairEvent> events,
                        AzimuthSelector selector, std::size_t bins,
                        std::optional<double> k = std::nullopt);

struct ChiSquare
{
    double chi2 = 0.0;
    std::size_t dof = 0;
    double reduced = 0.0;
    double p_value = 1.0;
};

/*!
 * Pearson chi-square of the counts against total() * analytic mass, with
 * bins - 1 degrees of freedom. Throws std::invalid_argument if the analytic
 * column is missing or an expected count is below min_expected.
 */
ChiSquare chi_square(const Histogram& h, double min_expected = 5.0);

/*!
 * Two-sample chi-square for binned data sets of possibly different sizes.
 * Bins empty in both samples are skipped. Degrees of freedom are the number
 * of used bins, minus one when the totals are equal.
 */
ChiSquare chi_square_two_sample(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b);

//! Row-major bins x bins counts of the polarization-relative (phi1, phi2).
std::vector<std::uint64_t>
histogram_phi_pair(std::span<const sampling::PairEvent> events,
                   std::size_t bins);

//! Closed-form chi-marginalized density R(phi1, phi2), unscaled. Supports
//! NaivePhi and Recommended; throws std::invalid_argument otherwise.
double reduced_density(models::ModelKind kind, double phi1, double phi2);

//! (2pi)^2 R on the grid phi = 2pi i / n, row-major over (phi1, phi2).
struct ReducedGrid
{
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * n2 + j]; }
    double max() const;
    double mean() const;
};

ReducedGrid reduced_2d(models::ModelKind kind, std::size_t n1, std::size_t n2);

struct Range
{
    double lo = 0.0;
    double hi = 0.0;
};

/*!
 * Ansatz-family non-negativity map. Entry (i, j) holds the minimum of the
 * density at (b_ff[i], b_gg[j]) over the angular grid; it is feasible iff that
 * minimum is >= -1e-12.
 */
struct FeasibilityMap
{
    std::vector<double> b_ff;
    std::vector<double> b_gg;
    std::vector<double> min_density;
    std::vector<bool> feasible;

    std::size_t index(std::size_t i, std::size_t j) const
    {
        return i * b_gg.size() + j;
    }
    std::size_t feasible_count() const;
};

//! `resolution` points per axis, end points included. Rows are assembled in
//! index order regardless of `workers`.
FeasibilityMap scan_ansatz(Range b_ff, Range b_gg, std::size_t resolution,
                           const models::AngularGrid& grid = {},
                           unsigned workers = 1);

} // namespace pairscatter::analysis
