#include "pairscatter/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pairscatter::io {

namespace {

std::string json_string(const std::string& s)
{
    return nlohmann::json(s).dump();
}

std::string json_real(double v)
{
    if (!std::isfinite(v))
        return "null";
    return format_real(v);
}

std::string json_value(const SummaryValue& v)
{
    if (const auto* s = std::get_if<std::string>(&v))
        return json_string(*s);
    if (const auto* d = std::get_if<double>(&v))
        return json_real(*d);
    return std::to_string(std::get<std::int64_t>(v));
}

std::string csv_value(const SummaryValue& v)
{
    if (const auto* s = std::get_if<std::string>(&v))
        return *s;
    if (const auto* d = std::get_if<double>(&v))
        return format_real(*d);
    return std::to_string(std::get<std::int64_t>(v));
}

// Summary values read back from text: integers, then reals, then strings.
SummaryValue parse_value(const std::string& text)
{
    if (!text.empty())
    {
        std::size_t used = 0;
        try
        {
            const long long i = std::stoll(text, &used);
            if (used == text.size())
                return static_cast<std::int64_t>(i);
        }
        catch (const std::exception&)
        {
        }
        try
        {
            const double d = std::stod(text, &used);
            if (used == text.size())
                return d;
        }
        catch (const std::exception&)
        {
        }
    }
    return text;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep))
        out.push_back(field);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

double bin_density(const analysis::Histogram& h, std::size_t i)
{
    const double total = static_cast<double>(h.total());
    const double width = h.edges()[i + 1] - h.edges()[i];
    if (total == 0.0)
        return 0.0;
    return static_cast<double>(h.counts()[i]) / (total * width) * kTwoPi;
}

double bin_analytic(const analysis::Histogram& h, std::size_t i)
{
    const double width = h.edges()[i + 1] - h.edges()[i];
    return (*h.analytic())[i] / width * kTwoPi;
}

double analytic_to_mass(double value, double lo, double hi)
{
    return value * (hi - lo) / kTwoPi;
}

} // namespace

void Summary::set(std::string key, SummaryValue value)
{
    for (auto& entry : entries_)
    {
        if (entry.first == key)
        {
            entry.second = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

const SummaryValue* Summary::find(const std::string& key) const
{
    for (const auto& entry : entries_)
    {
        if (entry.first == key)
            return &entry.second;
    }
    return nullptr;
}

double Summary::number(const std::string& key) const
{
    const auto* v = find(key);
    if (!v)
        throw std::out_of_range("summary has no key " + key);
    if (const auto* d = std::get_if<double>(v))
        return *d;
    if (const auto* i = std::get_if<std::int64_t>(v))
        return static_cast<double>(*i);
    throw std::invalid_argument("summary key " + key + " is not numeric");
}

std::string format_real(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_histogram_csv(std::ostream& out, const analysis::Histogram& h,
                         const Summary& summary)
{
    out << "# summary:\n";
    for (const auto& [key, value] : summary.entries())
        out << "# " << key << '=' << csv_value(value) << '\n';
    out << "bin_lo,bin_hi,count,density,analytic\n";
    for (std::size_t i = 0; i < h.bins(); ++i)
    {
        out << format_real(h.edges()[i]) << ',' << format_real(h.edges()[i + 1])
            << ',' << h.counts()[i] << ',' << format_real(bin_density(h, i))
            << ',';
        if (h.analytic())
            out << format_real(bin_analytic(h, i));
        out << '\n';
    }
}

HistogramFile read_histogram_csv(std::istream& in)
{
    Summary summary;
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::vector<double> analytic;
    bool has_analytic = true;
    bool header_seen = false;

    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        if (line.front() == '#')
        {
            const auto eq = line.find('=');
            if (eq != std::string::npos && line.size() > 2)
                summary.set(line.substr(2, eq - 2),
                            parse_value(line.substr(eq + 1)));
            continue;
        }
        if (!header_seen)
        {
            if (line != "bin_lo,bin_hi,count,density,analytic")
                throw std::runtime_error("unexpected histogram header: " + line);
            header_seen = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 5)
            throw std::runtime_error("malformed histogram row: " + line);
        const double lo = std::stod(fields[0]);
        const double hi = std::stod(fields[1]);
        if (edges.empty())
            edges.push_back(lo);
        edges.push_back(hi);
        counts.push_back(std::stoull(fields[2]));
        if (fields[4].empty())
            has_analytic = false;
        else
            analytic.push_back(analytic_to_mass(std::stod(fields[4]), lo, hi));
    }
    if (!header_seen)
        throw std::runtime_error("histogram file has no header");

    analysis::Histogram h(std::move(edges));
    h.counts() = std::move(counts);
    if (has_analytic && !analytic.empty())
        h.set_analytic(std::move(analytic));
    return {std::move(h), std::move(summary)};
}

void write_histogram_json(std::ostream& out, const analysis::Histogram& h,
                          const Summary& summary)
{
    out << "{\n  \"summary\": {";
    bool first = true;
    for (const auto& [key, value] : summary.entries())
    {
        out << (first ? "\n    " : ",\n    ") << json_string(key) << ": "
            << json_value(value);
        first = false;
    }
    out << "\n  },\n  \"bins\": [";
    for (std::size_t i = 0; i < h.bins(); ++i)
    {
        out << (i ? ",\n    " : "\n    ") << "{\"bin_lo\": "
            << format_real(h.edges()[i])
            << ", \"bin_hi\": " << format_real(h.edges()[i + 1])
            << ", \"count\": " << h.counts()[i]
            << ", \"density\": " << format_real(bin_density(h, i))
            << ", \"analytic\": "
            << (h.analytic() ? format_real(bin_analytic(h, i)) : "null") << '}';
    }
    out << "\n  ]\n}\n";
}

HistogramFile read_histogram_json(std::istream& in)
{
    const auto doc = nlohmann::ordered_json::parse(in);
    Summary summary;
    for (const auto& [key, value] : doc.at("summary").items())
    {
        if (value.is_number_integer())
            summary.set(key, value.get<std::int64_t>());
        else if (value.is_number())
            summary.set(key, value.get<double>());
        else
            summary.set(key, value.get<std::string>());
    }
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::vector<double> analytic;
    bool has_analytic = true;
    for (const auto& bin : doc.at("bins"))
    {
        const double lo = bin.at("bin_lo").get<double>();
        const double hi = bin.at("bin_hi").get<double>();
        if (edges.empty())
            edges.push_back(lo);
        edges.push_back(hi);
        counts.push_back(bin.at("count").get<std::uint64_t>());
        if (bin.at("analytic").is_null())
            has_analytic = false;
        else
            analytic.push_back(
                analytic_to_mass(bin.at("analytic").get<double>(), lo, hi));
    }
    analysis::Histogram h(std::move(edges));
    h.counts() = std::move(counts);
    if (has_analytic && !analytic.empty())
        h.set_analytic(std::move(analytic));
    return {std::move(h), std::move(summary)};
}

void write_summary_csv(std::ostream& out, const Summary& summary)
{
    out << "key,value\n";
    for (const auto& [key, value] : summary.entries())
        out << key << ',' << csv_value(value) << '\n';
}

void write_summary_json(std::ostream& out, const Summary& summary)
{
    out << '{';
    bool first = true;
    for (const auto& [key, value] : summary.entries())
    {
        out << (first ? "\n  " : ",\n  ") << json_string(key) << ": "
            << json_value(value);
        first = false;
    }
    out << "\n}\n";
}

void write_events_csv(std::ostream& out,
                      std::span<const sampling::PairEvent> events)
{
    out << "big_phi,orth_sign,chi1,phi1,chi2,phi2,fixed1_phi,fixed2_phi\n";
    for (const auto& e : events)
    {
        out << format_real(e.frame.big_phi) << ','
            << (e.frame.orth_sign == sampling::OrthSign::Plus ? '+' : '-')
            << ',' << format_real(e.photon1.chi().value()) << ','
            << format_real(e.photon1.phi()) << ','
            << format_real(e.photon2.chi().value()) << ','
            << format_real(e.photon2.phi()) << ',' << format_real(e.fixed1_phi)
            << ',' << format_real(e.fixed2_phi) << '\n';
    }
}

void write_events_json(std::ostream& out,
                       std::span<const sampling::PairEvent> events)
{
    out << "{\"events\": [";
    bool first = true;
    for (const auto& e : events)
    {
        out << (first ? "\n  " : ",\n  ") << "{\"big_phi\": "
            << format_real(e.frame.big_phi) << ", \"orth_sign\": "
            << (e.frame.orth_sign == sampling::OrthSign::Plus ? "\"+\""
                                                              : "\"-\"")
            << ", \"chi1\": " << format_real(e.photon1.chi().value())
            << ", \"phi1\": " << format_real(e.photon1.phi())
            << ", \"chi2\": " << format_real(e.photon2.chi().value())
            << ", \"phi2\": " << format_real(e.photon2.phi())
            << ", \"fixed1_phi\": " << format_real(e.fixed1_phi)
            << ", \"fixed2_phi\": " << format_real(e.fixed2_phi) << '}';
        first = false;
    }
    out << "\n]}\n";
}

std::vector<sampling::PairEvent> read_events_csv(std::istream& in)
{
    std::vector<sampling::PairEvent> events;
    std::string line;
    if (!std::getline(in, line)
        || line != "big_phi,orth_sign,chi1,phi1,chi2,phi2,fixed1_phi,fixed2_phi")
        throw std::runtime_error("unexpected events header");
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 8 || (f[1] != "+" && f[1] != "-"))
            throw std::runtime_error("malformed event row: " + line);
        const sampling::PolarizationFrame frame{
            std::stod(f[0]),
            f[1] == "+" ? sampling::OrthSign::Plus : sampling::OrthSign::Minus};
        events.push_back({frame,
                          {std::stod(f[2]), std::stod(f[3])},
                          {std::stod(f[4]), std::stod(f[5])},
                          std::stod(f[6]),
                          std::stod(f[7])});
    }
    return events;
}

void write_feasibility_csv(std::ostream& out, const analysis::FeasibilityMap& m)
{
    out << "b_ff,b_gg,min_density,feasible\n";
    for (std::size_t i = 0; i < m.b_ff.size(); ++i)
    {
        for (std::size_t j = 0; j < m.b_gg.size(); ++j)
        {
            const auto k = m.index(i, j);
            out << format_real(m.b_ff[i]) << ',' << format_real(m.b_gg[j])
                << ',' << format_real(m.min_density[k]) << ','
                << (m.feasible[k] ? "true" : "false") << '\n';
        }
    }
}

void write_feasibility_json(std::ostream& out,
                            const analysis::FeasibilityMap& m)
{
    out << "{\"rows\": [";
    bool first = true;
    for (std::size_t i = 0; i < m.b_ff.size(); ++i)
    {
        for (std::size_t j = 0; j < m.b_gg.size(); ++j)
        {
            const auto k = m.index(i, j);
            out << (first ? "\n  " : ",\n  ") << "{\"b_ff\": "
                << format_real(m.b_ff[i])
                << ", \"b_gg\": " << format_real(m.b_gg[j])
                << ", \"min_density\": " << format_real(m.min_density[k])
                << ", \"feasible\": " << (m.feasible[k] ? "true" : "false")
                << '}';
            first = false;
        }
    }
    out << "\n]}\n";
}

void write_checks_csv(std::ostream& out,
                      const std::vector<verify::CheckResult>& checks)
{
    out << "name,passed,value,tolerance,detail\n";
    for (const auto& c : checks)
    {
        std::string detail;
        for (char ch : c.detail)
        {
            if (ch == '"')
                detail += '"';
            detail += ch;
        }
        out << c.name << ',' << (c.passed ? "true" : "false") << ','
            << format_real(c.value) << ',' << format_real(c.tolerance) << ",\""
            << detail << "\"\n";
    }
}

void write_checks_json(std::ostream& out,
                       const std::vector<verify::CheckResult>& checks)
{
    out << "{\"passed\": "
        << (verify::first_failure(checks).empty() ? "true" : "false")
        << ", \"checks\": [";
    bool first = true;
    for (const auto& c : checks)
    {
        out << (first ? "\n  " : ",\n  ") << "{\"name\": " << json_string(c.name)
            << ", \"passed\": " << (c.passed ? "true" : "false")
            << ", \"value\": " << json_real(c.value)
            << ", \"tolerance\": " << json_real(c.tolerance)
            << ", \"detail\": " << json_string(c.detail) << '}';
        first = false;
    }
    out << "\n]}\n";
}

} // namespace pairscatter::io
