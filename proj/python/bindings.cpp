#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pairscatter/analysis.hpp"
#include "pairscatter/io.hpp"
#include "pairscatter/kinematics.hpp"
#include "pairscatter/models.hpp"
#include "pairscatter/pipeline.hpp"
#include "pairscatter/quantum.hpp"
#include "pairscatter/sampling.hpp"
#include "pairscatter/verify.hpp"

namespace py = pybind11;
namespace ps = pairscatter;

namespace {

using ps::models::ScatterAngles;

template <class T>
py::array_t<T> to_array(const std::vector<T>& v)
{
    py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::object summary_to_dict(const ps::io::Summary& s)
{
    py::dict d;
    for (const auto& [key, value] : s.entries())
        std::visit([&](const auto& v) { d[py::str(key)] = v; }, value);
    return std::move(d);
}

py::dict events_to_dict(const ps::sampling::PipelineResult& run)
{
    const auto n = static_cast<py::ssize_t>(run.events.size());
    py::array_t<double> big_phi(n), chi1(n), phi1(n), chi2(n), phi2(n), f1(n), f2(n);
    py::array_t<int> sign(n);
    for (py::ssize_t i = 0; i < n; ++i)
    {
        const auto& e = run.events[static_cast<std::size_t>(i)];
        big_phi.mutable_at(i) = e.frame.big_phi;
        sign.mutable_at(i) = e.frame.orth_sign == ps::sampling::OrthSign::Plus ? 1 : -1;
        chi1.mutable_at(i) = e.photon1.chi().value();
        phi1.mutable_at(i) = e.photon1.phi();
        chi2.mutable_at(i) = e.photon2.chi().value();
        phi2.mutable_at(i) = e.photon2.phi();
        f1.mutable_at(i) = e.fixed1_phi;
        f2.mutable_at(i) = e.fixed2_phi;
    }
    py::dict d;
    d["big_phi"] = big_phi;
    d["orth_sign"] = sign;
    d["chi1"] = chi1;
    d["phi1"] = phi1;
    d["chi2"] = chi2;
    d["phi2"] = phi2;
    d["fixed1_phi"] = f1;
    d["fixed2_phi"] = f2;
    d["proposals"] = run.stats.proposals;
    d["accepted"] = run.stats.accepted;
    return d;
}

ps::models::ModelKind reduced_kind(const std::string& name)
{
    if (name == "naive-phi")
        return ps::models::ModelKind::NaivePhi;
    if (name == "recommended")
        return ps::models::ModelKind::Recommended;
    throw std::invalid_argument("reduced distributions exist for naive-phi and "
                                "recommended only");
}

ps::sampling::Photon photon_from(int which)
{
    if (which != 1 && which != 2)
        throw std::invalid_argument("photon must be 1 or 2");
    return which == 1 ? ps::sampling::Photon::First : ps::sampling::Photon::Second;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Correlated Compton scattering of annihilation photon pairs";

    py::register_exception<std::domain_error>(m, "DomainError", PyExc_ValueError);

    m.def("big_f", py::overload_cast<double>(&ps::kinematics::big_f), py::arg("chi"));
    m.def("big_g", py::overload_cast<double>(&ps::kinematics::big_g), py::arg("chi"));
    m.def("constants", [] {
        const auto& c = ps::kinematics::constants();
        py::dict d;
        d["big_f_int"] = c.big_f_int;
        d["big_g_int"] = c.big_g_int;
        d["ratio"] = c.ratio;
        d["lambda"] = c.lambda;
        return d;
    });
    m.def("lambda_approximation", &ps::kinematics::lambda_approximation);

    m.def("kn_density", [](double chi, double phi) {
        return ps::models::kn_density({chi, phi});
    }, py::arg("chi"), py::arg("phi"));
    m.def("pw_density_fixed", [](double c1, double p1, double c2, double p2) {
        return ps::models::pw_density_fixed({c1, p1}, {c2, p2});
    }, py::arg("chi1"), py::arg("phi1"), py::arg("chi2"), py::arg("phi2"));
    m.def("naive_phi_density", [](double c1, double p1, double c2, double p2) {
        return ps::models::naive_phi_density({c1, p1}, {c2, p2});
    }, py::arg("chi1"), py::arg("phi1"), py::arg("chi2"), py::arg("phi2"));
    m.def("recommended_density", [](double c1, double p1, double c2, double p2) {
        return ps::models::recommended_density({c1, p1}, {c2, p2});
    }, py::arg("chi1"), py::arg("phi1"), py::arg("chi2"), py::arg("phi2"));
    m.def("ansatz_density",
          [](double c1, double p1, double c2, double p2, double b_ff, double b_gg) {
              return ps::models::ansatz_density({c1, p1}, {c2, p2}, b_ff, b_gg);
          },
          py::arg("chi1"), py::arg("phi1"), py::arg("chi2"), py::arg("phi2"),
          py::arg("b_ff"), py::arg("b_gg"));

    m.def("model_names", &ps::pipeline::names);
    m.def("run_pipeline",
          [](const std::string& model, std::size_t n, std::uint64_t seed,
             unsigned workers, std::optional<double> b_ff, std::optional<double> b_gg) {
              const auto p = ps::pipeline::parse(model, b_ff, b_gg);
              ps::sampling::PipelineResult run;
              {
                  py::gil_scoped_release release;
                  run = ps::sampling::run_pipeline(p.model, p.scheme, n, seed, workers);
              }
              return events_to_dict(run);
          },
          py::arg("model"), py::arg("n"), py::arg("seed"), py::arg("workers") = 1,
          py::arg("b_ff") = py::none(), py::arg("b_gg") = py::none(),
          "Sample n pair events; returns a dict of numpy arrays.");

    m.def("estimate_modulation",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> phis) {
              const auto est = ps::analysis::estimate_modulation(
                  {phis.data(), static_cast<std::size_t>(phis.size())});
              return py::make_tuple(est.k_hat, est.std_err, est.n);
          },
          py::arg("phis"), "Returns (k_hat, std_err, n).");
    m.def("analytic_marginal",
          [](const std::string& kind, int photon) {
              return ps::analysis::analytic_marginal(
                  ps::analysis::parse_marginal_kind(kind), photon_from(photon));
          },
          py::arg("kind"), py::arg("photon") = 2);

    m.def("marginals",
          [](const std::string& model, std::size_t samples, std::uint64_t seed,
             unsigned workers, std::size_t bins, int photon,
             std::optional<double> b_ff, std::optional<double> b_gg) {
              const auto p = ps::pipeline::parse(model, b_ff, b_gg);
              ps::pipeline::RunConfig cfg;
              cfg.samples = samples;
              cfg.seed = seed;
              cfg.workers = workers;
              cfg.bins = bins;
              cfg.photon = photon_from(photon);
              std::optional<ps::pipeline::MarginalOutput> out;
              {
                  py::gil_scoped_release release;
                  out.emplace(ps::pipeline::marginals(p, cfg));
              }
              py::dict d;
              d["edges"] = to_array(out->histogram.edges());
              d["counts"] = to_array(out->histogram.counts());
              d["analytic"] = out->histogram.analytic()
                                  ? py::object(to_array(*out->histogram.analytic()))
                                  : py::none();
              d["summary"] = summary_to_dict(out->summary);
              std::ostringstream csv;
              ps::io::write_histogram_csv(csv, out->histogram, out->summary);
              d["csv"] = csv.str();
              return d;
          },
          py::arg("model"), py::arg("samples"), py::arg("seed"),
          py::arg("workers") = 1, py::arg("bins") = 64, py::arg("photon") = 2,
          py::arg("b_ff") = py::none(), py::arg("b_gg") = py::none());

    m.def("reduced_2d",
          [](const std::string& model, std::size_t n1, std::size_t n2) {
              const auto g = ps::analysis::reduced_2d(reduced_kind(model), n1, n2);
              py::array_t<double> out({static_cast<py::ssize_t>(n1),
                                       static_cast<py::ssize_t>(n2)});
              std::copy(g.values.begin(), g.values.end(), out.mutable_data());
              return out;
          },
          py::arg("model"), py::arg("n1") = 256, py::arg("n2") = 256,
          "(2 pi)^2 R(phi1, phi2) on phi = 2 pi i / n.");

    m.def("scan_ansatz",
          [](std::pair<double, double> bff, std::pair<double, double> bgg,
             std::size_t resolution, unsigned workers) {
              ps::analysis::FeasibilityMap map;
              {
                  py::gil_scoped_release release;
                  map = ps::analysis::scan_ansatz({bff.first, bff.second},
                                                  {bgg.first, bgg.second}, resolution,
                                                  {}, workers);
              }
              const auto ni = static_cast<py::ssize_t>(map.b_ff.size());
              const auto nj = static_cast<py::ssize_t>(map.b_gg.size());
              py::array_t<double> min_density({ni, nj});
              py::array_t<bool> feasible({ni, nj});
              for (py::ssize_t i = 0; i < ni; ++i)
                  for (py::ssize_t j = 0; j < nj; ++j)
                  {
                      const auto k = map.index(static_cast<std::size_t>(i),
                                               static_cast<std::size_t>(j));
                      min_density.mutable_at(i, j) = map.min_density[k];
                      feasible.mutable_at(i, j) = map.feasible[k];
                  }
              py::dict d;
              d["b_ff"] = to_array(map.b_ff);
              d["b_gg"] = to_array(map.b_gg);
              d["min_density"] = min_density;
              d["feasible"] = feasible;
              return d;
          },
          py::arg("bff_range"), py::arg("bgg_range"), py::arg("resolution"),
          py::arg("workers") = 1);

    m.def("verify",
          [](bool fast, std::uint64_t seed) {
              ps::verify::Options opt;
              opt.fast = fast;
              opt.seed = seed;
              std::vector<ps::verify::CheckResult> results;
              {
                  py::gil_scoped_release release;
                  results = ps::verify::run_all(opt);
              }
              py::list out;
              for (const auto& r : results)
              {
                  py::dict d;
                  d["name"] = r.name;
                  d["passed"] = r.passed;
                  d["value"] = r.value;
                  d["tolerance"] = r.tolerance;
                  d["detail"] = r.detail;
                  out.append(d);
              }
              return out;
          },
          py::arg("fast") = false, py::arg("seed") = ps::verify::Options{}.seed);

    m.def("singlet", [] {
        const auto s = ps::quantum::singlet();
        return std::vector<double>(s.data(), s.data() + 4);
    });
    m.def("rotated_singlet", [](double big_phi) {
        const auto s = ps::quantum::rotated_singlet(big_phi);
        return std::vector<double>(s.data(), s.data() + 4);
    }, py::arg("big_phi"));
    m.def("expectation_pair", [](double c1, double p1, double c2, double p2) {
        return ps::quantum::expectation_pair({c1, p1}, {c2, p2});
    }, py::arg("chi1"), py::arg("phi1"), py::arg("chi2"), py::arg("phi2"));
    m.def("decomposition_check", [](std::size_t nodes) {
        const auto e = ps::quantum::decomposition_check(nodes);
        return py::make_tuple(e.plus, e.minus);
    }, py::arg("nodes") = 256);
}
