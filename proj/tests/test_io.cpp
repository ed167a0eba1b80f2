#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pairscatter/io.hpp"
#include "support.hpp"

namespace ps = pairscatter;
namespace a = pairscatter::analysis;
namespace io = pairscatter::io;

namespace {

a::Histogram random_histogram(std::mt19937_64& eng, bool with_analytic)
{
    std::uniform_int_distribution<std::size_t> nbins(2, 80);
    std::uniform_real_distribution<> width(1e-6, 3.0);
    std::uniform_real_distribution<> start(-50.0, 50.0);
    std::uniform_int_distribution<std::uint64_t> count(0, std::uint64_t{1} << 40);

    const std::size_t bins = nbins(eng);
    std::vector<double> edges{start(eng)};
    for (std::size_t i = 0; i < bins; ++i)
        edges.push_back(edges.back() + width(eng));
    a::Histogram h(edges);
    for (auto& c : h.counts())
        c = count(eng);
    if (with_analytic)
    {
        std::vector<double> masses(bins);
        std::uniform_real_distribution<> mass(0.0, 1.0);
        for (auto& m : masses)
            m = mass(eng);
        h.set_analytic(masses);
    }
    return h;
}

void check_same(const a::Histogram& got, const a::Histogram& want)
{
    REQUIRE(got.bins() == want.bins());
    CHECK(got.edges() == want.edges());
    CHECK(got.counts() == want.counts());
    REQUIRE(got.analytic().has_value() == want.analytic().has_value());
    if (want.analytic())
    {
        for (std::size_t i = 0; i < want.bins(); ++i)
        {
            const double w = (*want.analytic())[i];
            CHECK(std::abs((*got.analytic())[i] - w) <= 1e-15 * std::max(1.0, std::abs(w)));
        }
    }
}

io::Summary sample_summary()
{
    io::Summary s;
    s.set("model", std::string("recommended"));
    s.set("seed", std::int64_t{18446744073709551});
    s.set("k_hat", 0.34341507236799462);
    s.set("std_err", 4.3e-4);
    return s;
}

} // namespace

TEST_CASE("reals print with 17 significant digits")
{
    CHECK(io::format_real(0.1) == "0.10000000000000001");
    CHECK(std::stod(io::format_real(ps::kPi)) == ps::kPi);
}

TEST_CASE("histogram CSV round trip")
{
    std::mt19937_64 eng(51);
    for (int t = 0; t < 200; ++t)
    {
        const auto h = random_histogram(eng, t % 3 != 0);
        std::stringstream ss;
        io::write_histogram_csv(ss, h, sample_summary());
        const auto back = io::read_histogram_csv(ss);
        check_same(back.histogram, h);
        CHECK(back.summary == sample_summary());
    }
}

TEST_CASE("histogram JSON round trip")
{
    std::mt19937_64 eng(52);
    for (int t = 0; t < 100; ++t)
    {
        const auto h = random_histogram(eng, t % 2 == 0);
        std::stringstream ss;
        io::write_histogram_json(ss, h, sample_summary());
        const auto back = io::read_histogram_json(ss);
        check_same(back.histogram, h);
        CHECK(back.summary == sample_summary());
    }
}

TEST_CASE("histogram CSV layout")
{
    auto h = a::Histogram::uniform(0.0, ps::kTwoPi, 2);
    h.counts() = {3, 1};
    h.set_analytic({0.5, 0.5});
    io::Summary s;
    s.set("n", std::int64_t{4});
    std::stringstream ss;
    io::write_histogram_csv(ss, h, s);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "# summary:");
    std::getline(ss, line);
    CHECK(line == "# n=4");
    std::getline(ss, line);
    CHECK(line == "bin_lo,bin_hi,count,density,analytic");
    std::getline(ss, line);
    // density 3 / (4 pi) scaled by 2pi -> 1.5; analytic 0.5 / pi * 2pi -> 1.
    CHECK(line.substr(line.find(",3,") + 3) == "1.5,1");
}

TEST_CASE("malformed histogram files are rejected")
{
    std::stringstream no_header("1,2,3,4,5\n");
    CHECK_THROWS_AS(io::read_histogram_csv(no_header), std::runtime_error);
    std::stringstream short_row("bin_lo,bin_hi,count,density,analytic\n0,1,2\n");
    CHECK_THROWS_AS(io::read_histogram_csv(short_row), std::runtime_error);
    std::stringstream empty("");
    CHECK_THROWS_AS(io::read_histogram_csv(empty), std::runtime_error);
}

TEST_CASE("event CSV round trip")
{
    const auto run = ps::sampling::run_pipeline({ps::models::ModelKind::Recommended},
                                                ps::sampling::Scheme::Joint, 500, 5);
    std::stringstream ss;
    io::write_events_csv(ss, run.events);
    const auto back = io::read_events_csv(ss);
    REQUIRE(back.size() == run.events.size());
    for (std::size_t i = 0; i < back.size(); ++i)
    {
        CHECK(back[i].frame.big_phi == run.events[i].frame.big_phi);
        CHECK(back[i].frame.orth_sign == run.events[i].frame.orth_sign);
        CHECK(back[i].photon1 == run.events[i].photon1);
        CHECK(back[i].photon2 == run.events[i].photon2);
        CHECK(back[i].fixed1_phi == run.events[i].fixed1_phi);
        CHECK(back[i].fixed2_phi == run.events[i].fixed2_phi);
    }
    std::stringstream bad("nope\n");
    CHECK_THROWS_AS(io::read_events_csv(bad), std::runtime_error);
}

TEST_CASE("feasibility map output")
{
    const auto map = a::scan_ansatz({-1.0, 1.0}, {-1.0, 1.0}, 3, {9, 8});
    std::stringstream csv;
    io::write_feasibility_csv(csv, map);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "b_ff,b_gg,min_density,feasible");
    int rows = 0, feasible = 0;
    while (std::getline(csv, line))
    {
        ++rows;
        if (line.rfind("0,0,", 0) == 0)
            CHECK(line.substr(line.rfind(',') + 1) == "true");
        feasible += line.ends_with(",true");
    }
    CHECK(rows == 9);
    CHECK(feasible == static_cast<int>(map.feasible_count()));

    std::stringstream json;
    io::write_feasibility_json(json, map);
    CHECK(json.str().find("\"feasible\": true") != std::string::npos);
}
