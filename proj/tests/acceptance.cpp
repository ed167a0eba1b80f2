// Acceptance suite: one pass/fail line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "pairscatter/analysis.hpp"
#include "pairscatter/io.hpp"
#include "pairscatter/kinematics.hpp"
#include "pairscatter/pipeline.hpp"
#include "pairscatter/sampling.hpp"
#include "pairscatter/verify.hpp"

namespace ps = pairscatter;
namespace a = pairscatter::analysis;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome
{
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok)
        {
            passed = false;
            detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
        }
    }
    void note(const std::string& text)
    {
        detail += (detail.empty() ? "" : "; ") + text;
    }
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

std::string failed_checks(const std::vector<ps::verify::CheckResult>& results)
{
    std::string out;
    for (const auto& r : results)
        if (!r.passed)
            out += (out.empty() ? "" : ",") + r.name;
    return out;
}

Outcome ac1_constants()
{
    Outcome o;
    const auto start = Clock::now();
    const auto& c = ps::kinematics::constants();
    const double elapsed = seconds_since(start);
    const double f_err = std::abs(c.big_f_int - (40.0 - 27.0 * std::log(3.0)) / 9.0);
    const double g_err = std::abs(c.big_g_int - 4.0 * (std::log(3.0) - 1.0));
    o.require(f_err <= 1e-10, "F_int");
    o.require(g_err <= 1e-10, "G_int");
    o.require(std::abs(c.ratio - 0.3434) <= 5e-5, "ratio");
    o.require(std::abs(c.lambda - 0.08457) <= 5e-5, "lambda");
    o.require(elapsed < 1.0, "runtime");
    o.note(fmt("F_int=%.12f G_int=%.12f", c.big_f_int, c.big_g_int));
    o.note(fmt("ratio=%.6f lambda=%.6f t=%.3fs", c.ratio, c.lambda, elapsed));
    return o;
}

struct CorrelationStats
{
    a::ModulationEstimate polarization;
    a::ModulationEstimate fixed;
};

CorrelationStats correlations(const std::vector<ps::sampling::PairEvent>& events)
{
    std::vector<double> pol, fixed;
    pol.reserve(events.size());
    fixed.reserve(events.size());
    for (const auto& e : events)
    {
        pol.push_back(e.photon2.phi() - e.photon1.phi());
        fixed.push_back(e.fixed2_phi - e.fixed1_phi);
    }
    return {a::scaled_cos2_mean(pol, 2.0), a::scaled_cos2_mean(fixed, 2.0)};
}

// Runs the four marginal pipelines once and evaluates criteria 2 and 3 from
// the same samples.
void ac2_ac3(Outcome& ac2, Outcome& ac3)
{
    const std::size_t n = 10000000;
    const struct
    {
        const char* name;
        const char* label;
        double paper_k;
    } runs[] = {{"kn-independent", "KN+KN", 0.3434},
                {"pw-direct", "KN+PW", 0.02904},
                {"pw-joint", "PW+PW", 0.0},
                {"recommended", "Recommended", 0.3434}};

    const double r2 = std::pow(ps::kinematics::constants().ratio, 2);
    CorrelationStats direct{};
    const auto start = Clock::now();
    for (const auto& run : runs)
    {
        const auto p = ps::pipeline::parse(run.name);
        const auto result =
            ps::sampling::run_pipeline(p.model, p.scheme, n, 20240611);
        const double k = a::analytic_marginal(p.marginal);
        const auto est = a::estimate_modulation(
            a::collect_azimuths(result.events, a::AzimuthSelector::Photon2));
        const auto h =
            a::histogram_phi(result.events, a::AzimuthSelector::Photon2, 64, k);
        const auto chi = a::chi_square(h);
        ac2.require(std::abs(est.k_hat - k) <= 2.5e-3, std::string(run.label) + " k_hat");
        ac2.require(std::abs(k - run.paper_k) <= 5e-5, std::string(run.label) + " analytic k");
        ac2.require(chi.reduced >= 0.5 && chi.reduced <= 1.5,
                    std::string(run.label) + " reduced chi2");
        ac2.note(std::string(run.label)
                 + fmt(" k_hat=%.5f+-%.5f chi2/dof=%.3f", est.k_hat, est.std_err,
                       chi.reduced));

        if (std::string(run.name) == "pw-direct")
            direct = correlations(result.events);
        if (std::string(run.name) == "recommended")
        {
            const auto rec = correlations(result.events);
            ac3.require(std::abs(rec.polarization.k_hat - 0.11794) <= 2.5e-3
                            && std::abs(rec.polarization.k_hat - r2) <= 2.5e-3,
                        "polarization-frame correlation");
            ac3.require(std::abs(rec.fixed.k_hat + 0.11794) <= 2.5e-3
                            && std::abs(rec.fixed.k_hat + r2) <= 2.5e-3,
                        "fixed-frame correlation");
            const double combined = std::hypot(rec.fixed.std_err, direct.fixed.std_err);
            const double diff = std::abs(rec.fixed.k_hat - direct.fixed.k_hat);
            ac3.require(diff <= 3.0 * combined, "agreement with direct Pryce-Ward");
            ac3.note(fmt("pol=%.5f+-%.5f fixed=%.5f", rec.polarization.k_hat,
                         rec.polarization.std_err, rec.fixed.k_hat));
            ac3.note(fmt("direct PW fixed=%.5f+-%.5f |diff|/sigma=%.2f",
                         direct.fixed.k_hat, direct.fixed.std_err, diff / combined));
        }
    }
    ac2.note(fmt("t=%.1fs", seconds_since(start)));
}

Outcome ac4_reduced()
{
    Outcome o;
    const auto start = Clock::now();
    const auto naive = a::reduced_2d(ps::models::ModelKind::NaivePhi, 256, 256);
    const auto rec = a::reduced_2d(ps::models::ModelKind::Recommended, 256, 256);
    const double elapsed = seconds_since(start);
    const double naive_peak = std::round(naive.max() * 1000.0) / 1000.0;
    const double rec_peak = std::round(rec.max() * 1000.0) / 1000.0;
    o.require(naive_peak == 1.118, "R' peak");
    o.require(rec_peak == 1.805, "R peak");
    o.require(elapsed < 1.0, "runtime");
    o.note(fmt("R' peak=%.6f R peak=%.6f t=%.3fs", naive.max(), rec.max(), elapsed));
    return o;
}

Outcome ac5_identities()
{
    Outcome o;
    ps::verify::Options opt;
    const auto start = Clock::now();
    std::vector<ps::verify::CheckResult> all;
    for (auto suite : {ps::verify::check_normalization, ps::verify::check_marginals,
                       ps::verify::check_averaging_identity,
                       ps::verify::check_non_negativity, ps::verify::check_symmetry})
    {
        auto part = suite(opt);
        all.insert(all.end(), part.begin(), part.end());
    }
    const double elapsed = seconds_since(start);
    const auto failed = failed_checks(all);
    o.require(failed.empty(), failed);
    o.require(elapsed < 30.0, "runtime");
    o.note(std::to_string(all.size()) + " checks" + fmt(" t=%.2fs", elapsed));
    return o;
}

Outcome ac6_quantum()
{
    Outcome o;
    const auto start = Clock::now();
    const auto results = ps::verify::check_quantum({});
    const double elapsed = seconds_since(start);
    const auto failed = failed_checks(results);
    o.require(failed.empty(), failed);
    o.require(elapsed < 1.0, "runtime");
    for (const auto& r : results)
        o.note(r.name + fmt("=%.1e", r.value));
    o.note(fmt("t=%.3fs", elapsed));
    return o;
}

Outcome ac7_staged_vs_joint()
{
    Outcome o;
    const auto results = ps::verify::check_staged_vs_joint({});
    for (const auto& r : results)
    {
        o.require(r.passed && r.value > 0.001, r.name);
        o.note(fmt("p=%.4f", r.value) + " " + r.detail);
    }
    return o;
}

std::string render(const std::string& name, std::size_t n, std::uint64_t seed,
                   unsigned workers)
{
    const auto p = ps::pipeline::parse(name);
    ps::pipeline::RunConfig cfg;
    cfg.samples = n;
    cfg.seed = seed;
    cfg.workers = workers;
    const auto run = ps::sampling::run_pipeline(p.model, p.scheme, n, seed, workers);
    const auto out = ps::pipeline::marginals(p, cfg, run.events, run.stats);
    std::ostringstream ss;
    ps::io::write_events_csv(ss, run.events);
    ps::io::write_histogram_csv(ss, out.histogram, out.summary);
    ps::io::write_histogram_json(ss, out.histogram, out.summary);
    return ss.str();
}

Outcome ac8_determinism()
{
    Outcome o;
    int compared = 0;
    for (const auto& name : {"kn-independent", "pw-direct", "pw-joint", "naive-phi",
                             "recommended"})
    {
        for (unsigned workers : {1u, 3u})
        {
            const auto first = render(name, 20000, 99, workers);
            const auto second = render(name, 20000, 99, workers);
            o.require(first == second, std::string(name) + " workers="
                                           + std::to_string(workers));
            ++compared;
        }
    }
    o.note(std::to_string(compared) + " reruns byte-identical");
    return o;
}

} // namespace

int main()
{
    struct Line
    {
        const char* id;
        const char* title;
        Outcome outcome;
    };
    std::vector<Line> lines;
    auto report = [&](const char* id, const char* title, const Outcome& o) {
        std::printf("%s %s %s: %s\n", o.passed ? "PASS" : "FAIL", id, title,
                    o.detail.c_str());
        std::fflush(stdout);
        lines.push_back({id, title, o});
    };

    report("AC1", "constants", ac1_constants());
    Outcome ac2, ac3;
    ac2_ac3(ac2, ac3);
    report("AC2", "marginal moments and chi-square (n=1e7 per pipeline)", ac2);
    report("AC3", "recommended pair correlation", ac3);
    report("AC4", "reduced 2D peaks (256x256)", ac4_reduced());
    report("AC5", "identity suite", ac5_identities());
    report("AC6", "quantum suite", ac6_quantum());
    report("AC7", "staged vs joint sampling (1e6 each)", ac7_staged_vs_joint());
    report("AC8", "determinism", ac8_determinism());

    bool all = true;
    for (const auto& l : lines)
        all = all && l.outcome.passed;
    std::printf("%s\n", all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
    return all ? 0 : 1;
}
