#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pairscatter/analysis.hpp"
#include "pairscatter/sampling.hpp"
#include "pairscatter/verify.hpp"

// Plot-ready output files. Reals are written with 17 significant digits so
// every double survives a write/read cycle.
namespace pairscatter::io {

using SummaryValue = std::variant<std::string, double, std::int64_t>;

//! Ordered key/value metadata written alongside a histogram.
class Summary
{
  public:
    void set(std::string key, SummaryValue value);
    const SummaryValue* find(const std::string& key) const;
    double number(const std::string& key) const;

    const std::vector<std::pair<std::string, SummaryValue>>& entries() const
    {
        return entries_;
    }
    friend bool operator==(const Summary&, const Summary&) = default;

  private:
    std::vector<std::pair<std::string, SummaryValue>> entries_;
};

struct HistogramFile
{
    analysis::Histogram histogram;
    Summary summary;
};

std::string format_real(double value);

/*!
 * CSV layout:
 *
 *   # summary:
 *   # key=value          (one line per summary entry)
 *   bin_lo,bin_hi,count,density,analytic
 *   ...
 *
 * density is count / (total * width) scaled by 2 pi; analytic is the model
 * mass of the bin divided by its width, scaled by 2 pi (empty when absent).
 */
void write_histogram_csv(std::ostream& out, const analysis::Histogram& h,
                         const Summary& summary);
HistogramFile read_histogram_csv(std::istream& in);

//! {"summary": {...}, "bins": [{bin_lo, bin_hi, count, density, analytic}]}
void write_histogram_json(std::ostream& out, const analysis::Histogram& h,
                          const Summary& summary);
HistogramFile read_histogram_json(std::istream& in);

//! Bare summary: key,value rows, or a flat JSON object.
void write_summary_csv(std::ostream& out, const Summary& summary);
void write_summary_json(std::ostream& out, const Summary& summary);

//! One row per event: polarization frame, both photons in both frames.
void write_events_csv(std::ostream& out,
                      std::span<const sampling::PairEvent> events);
void write_events_json(std::ostream& out,
                       std::span<const sampling::PairEvent> events);
std::vector<sampling::PairEvent> read_events_csv(std::istream& in);

//! Rows b_ff,b_gg,min_density,feasible.
void write_feasibility_csv(std::ostream& out, const analysis::FeasibilityMap& m);
void write_feasibility_json(std::ostream& out,
                            const analysis::FeasibilityMap& m);

//! Rows name,passed,value,tolerance,detail; detail is double-quoted.
void write_checks_csv(std::ostream& out,
                      const std::vector<verify::CheckResult>& checks);
void write_checks_json(std::ostream& out,
                       const std::vector<verify::CheckResult>& checks);

} // namespace pairscatter::io
