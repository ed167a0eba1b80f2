#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pairscatter/analysis.hpp"
#include "pairscatter/io.hpp"
#include "pairscatter/pipeline.hpp"
#include "pairscatter/sampling.hpp"
#include "pairscatter/verify.hpp"

namespace ps = pairscatter;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Flags
{
    std::vector<std::string> models;
    std::optional<double> b_ff;
    std::optional<double> b_gg;
    std::size_t samples = 1000000;
    std::uint64_t seed = 1;
    std::size_t bins = 64;
    unsigned workers = 1;
    int photon = 2;
    std::string out;
    std::string in;
    std::string format = "csv";
    bool fast = false;
    std::string bff_range = "-1:1";
    std::string bgg_range = "-1:1";
    std::size_t resolution = 21;
};

// Writes to `path`, or stdout for "" and "-".
void emit(const std::string& path, const std::function<void(std::ostream&)>& f)
{
    if (path.empty() || path == "-")
    {
        f(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw UsageError("cannot open output file: " + path);
    f(file);
    file.close();
    if (!file)
        throw UsageError("failed writing output file: " + path);
}

// out.csv + "pw-direct" -> out-pw-direct.csv
std::string suffixed(const std::string& path, const std::string& tag)
{
    const std::filesystem::path p(path);
    auto name = p.stem().string() + "-" + tag + p.extension().string();
    return (p.parent_path() / name).string();
}

ps::analysis::Range parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
        throw UsageError("malformed range (expected lo:hi): " + text);
    try
    {
        std::size_t used = 0;
        const std::string lo_s = text.substr(0, colon);
        const std::string hi_s = text.substr(colon + 1);
        const double lo = std::stod(lo_s, &used);
        if (used != lo_s.size())
            throw std::invalid_argument("trailing characters");
        const double hi = std::stod(hi_s, &used);
        if (used != hi_s.size())
            throw std::invalid_argument("trailing characters");
        if (!(lo <= hi))
            throw std::invalid_argument("lo > hi");
        return {lo, hi};
    }
    catch (const std::exception&)
    {
        throw UsageError("malformed range (expected lo:hi): " + text);
    }
}

ps::pipeline::Pipeline single_pipeline(const Flags& f)
{
    if (f.models.size() != 1)
        throw UsageError("exactly one --model is required");
    return ps::pipeline::parse(f.models.front(), f.b_ff, f.b_gg);
}

ps::pipeline::RunConfig run_config(const Flags& f)
{
    ps::pipeline::RunConfig cfg;
    cfg.samples = f.samples;
    cfg.seed = f.seed;
    cfg.workers = f.workers;
    cfg.bins = f.bins;
    cfg.photon = f.photon == 1 ? ps::sampling::Photon::First
                               : ps::sampling::Photon::Second;
    return cfg;
}

int cmd_sample(const Flags& f)
{
    const auto p = single_pipeline(f);
    const auto run =
        ps::sampling::run_pipeline(p.model, p.scheme, f.samples, f.seed, f.workers);
    emit(f.out, [&](std::ostream& os) {
        if (f.format == "json")
            ps::io::write_events_json(os, run.events);
        else
            ps::io::write_events_csv(os, run.events);
    });
    return kExitOk;
}

int cmd_marginals(const Flags& f)
{
    if (f.models.empty())
        throw UsageError("at least one --model is required");
    if (f.models.size() > 1 && (f.out.empty() || f.out == "-"))
        throw UsageError("several models need --out to name the files");
    const auto cfg = run_config(f);
    for (const auto& name : f.models)
    {
        const auto p = ps::pipeline::parse(name, f.b_ff, f.b_gg);
        const auto result = ps::pipeline::marginals(p, cfg);
        const auto path = f.models.size() > 1 ? suffixed(f.out, name) : f.out;
        emit(path, [&](std::ostream& os) {
            if (f.format == "json")
                ps::io::write_histogram_json(os, result.histogram, result.summary);
            else
                ps::io::write_histogram_csv(os, result.histogram, result.summary);
        });
    }
    return kExitOk;
}

int cmd_fit(const Flags& f)
{
    ps::io::Summary summary;
    if (!f.in.empty())
    {
        std::ifstream file(f.in, std::ios::binary);
        if (!file)
            throw UsageError("cannot open input file: " + f.in);
        const auto events = ps::io::read_events_csv(file);
        summary = ps::pipeline::fit(events);
        summary.set("source", f.in);
    }
    else
    {
        const auto p = single_pipeline(f);
        const auto run = ps::sampling::run_pipeline(p.model, p.scheme, f.samples,
                                                    f.seed, f.workers);
        summary = ps::pipeline::fit(run.events);
        summary.set("model", p.name);
        summary.set("seed", static_cast<std::int64_t>(f.seed));
        summary.set("workers", static_cast<std::int64_t>(f.workers));
    }
    emit(f.out, [&](std::ostream& os) {
        if (f.format == "json")
            ps::io::write_summary_json(os, summary);
        else
            ps::io::write_summary_csv(os, summary);
    });
    return kExitOk;
}

int report(const Flags& f, const std::vector<ps::verify::CheckResult>& checks)
{
    emit(f.out, [&](std::ostream& os) {
        if (f.format == "json")
            ps::io::write_checks_json(os, checks);
        else
            ps::io::write_checks_csv(os, checks);
    });
    const auto failed = ps::verify::first_failure(checks);
    if (!failed.empty())
    {
        std::cerr << "verification failed: " << failed << '\n';
        return kExitVerification;
    }
    return kExitOk;
}

int cmd_verify(const Flags& f)
{
    ps::verify::Options opt;
    opt.fast = f.fast;
    opt.seed = f.seed;
    return report(f, ps::verify::run_all(opt));
}

int cmd_quantum_check(const Flags& f)
{
    ps::verify::Options opt;
    opt.seed = f.seed;
    return report(f, ps::verify::check_quantum(opt));
}

int cmd_scan_ansatz(const Flags& f)
{
    const auto bff = parse_range(f.bff_range);
    const auto bgg = parse_range(f.bgg_range);
    const auto map = ps::analysis::scan_ansatz(bff, bgg, f.resolution, {}, f.workers);
    emit(f.out, [&](std::ostream& os) {
        if (f.format == "json")
            ps::io::write_feasibility_json(os, map);
        else
            ps::io::write_feasibility_csv(os, map);
    });
    return kExitOk;
}

void add_output(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--out", f.out, "Output file (default: stdout)");
    cmd->add_option("--format", f.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

void add_seed(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--seed", f.seed, "64-bit seed")
        ->envname("PAIRSCATTER_SEED")
        ->capture_default_str();
}

void add_workers(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--workers", f.workers, "Worker threads / partitions")
        ->check(CLI::Range(1u, 4096u))
        ->capture_default_str();
}

void add_sampling(CLI::App* cmd, Flags& f, bool many_models)
{
    auto* model = cmd->add_option("--model", f.models, "Pipeline name")
                      ->check(CLI::IsMember(ps::pipeline::names()));
    if (!many_models)
        model->expected(1);
    cmd->add_option("--bff", f.b_ff, "Ansatz coefficient B_FF");
    cmd->add_option("--bgg", f.b_gg, "Ansatz coefficient B_GG");
    cmd->add_option("--samples", f.samples, "Number of events")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_seed(cmd, f);
    add_workers(cmd, f);
    add_output(cmd, f);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo sampler and verifier for correlated Compton "
                 "scattering of annihilation photon pairs"};
    app.require_subcommand(1);
    Flags f;

    auto* sample = app.add_subcommand("sample", "Write sampled events");
    add_sampling(sample, f, false);

    auto* marginals =
        app.add_subcommand("marginals", "Azimuthal marginal histograms");
    add_sampling(marginals, f, true);
    marginals->add_option("--bins", f.bins, "Histogram bins")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24))
        ->capture_default_str();
    marginals->add_option("--photon", f.photon, "Photon to histogram")
        ->check(CLI::IsMember({1, 2}))
        ->capture_default_str();

    auto* fit = app.add_subcommand("fit", "Moment estimates of k and the "
                                          "pair correlation");
    add_sampling(fit, f, false);
    fit->add_option("--in", f.in, "Read events from a CSV file instead")
        ->check(CLI::ExistingFile);

    auto* verify = app.add_subcommand("verify", "Run every invariant suite");
    verify->add_flag("--fast", f.fast, "Relaxed tolerances, smaller samples");
    add_seed(verify, f);
    add_output(verify, f);

    auto* scan = app.add_subcommand("scan-ansatz",
                                    "Non-negativity map of the ansatz family");
    scan->add_option("--bff-range", f.bff_range, "lo:hi")->capture_default_str();
    scan->add_option("--bgg-range", f.bgg_range, "lo:hi")->capture_default_str();
    scan->add_option("--res", f.resolution, "Points per axis")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
        ->capture_default_str();
    add_workers(scan, f);
    add_output(scan, f);

    auto* quantum =
        app.add_subcommand("quantum-check", "Polarization algebra checks");
    add_seed(quantum, f);
    add_output(quantum, f);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (*sample)
            return cmd_sample(f);
        if (*marginals)
            return cmd_marginals(f);
        if (*fit)
            return cmd_fit(f);
        if (*verify)
            return cmd_verify(f);
        if (*scan)
            return cmd_scan_ansatz(f);
        if (*quantum)
            return cmd_quantum_check(f);
    }
    catch (const std::exception& e)
    {
        // Bad flags, infeasible ansatz coefficients, unwritable paths.
        std::cerr << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}
