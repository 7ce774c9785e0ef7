#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypdet/bm.hpp"
#include "hypdet/constants.hpp"
#include "hypdet/cover.hpp"
#include "hypdet/determinant.hpp"
#include "hypdet/experiment.hpp"
#include "hypdet/fuchsian.hpp"
#include "hypdet/heat.hpp"
#include "hypdet/spectrum.hpp"

namespace py = pybind11;
using namespace hypdet;

namespace {

spectrum::LengthSpectrum enumerate_catalog(const std::string& name, double L) {
    return fuchsian::enumerate_primitives(fuchsian::catalog(name), L);
}

py::dict det_to_dict(const determinant::DetResult& r, double volume) {
    py::dict d;
    d["value"] = r.value;
    d["error"] = r.error;
    d["budget"] = r.budget;
    d["warnings"] = r.warnings;
    d["normalized"] = r.value / volume;
    d["normalized_error"] = r.error / volume;
    return d;
}

} // namespace

PYBIND11_MODULE(_hypdet, m) {
    m.doc() = "Length spectra, heat traces and regularized determinants of hyperbolic "
              "surfaces; random-cover and cubic-graph ensembles.";

    // constants
    m.def("constant_E", [] { return constants::universal().E; });
    m.def("euler_gamma", [] { return constants::universal().euler_gamma; });
    m.def("zeta_prime_minus1", [] { return constants::universal().zeta_prime_minus1; });
    m.def("log_glaisher", [] { return constants::universal().log_A; });
    m.def("glaisher_limit", &constants::glaisher_limit, py::arg("n"));
    m.def("G", &constants::G, py::arg("u"));
    m.def("G_bound", &constants::G_bound, py::arg("u"));

    // spectra
    py::class_<spectrum::PrimitiveClass>(m, "PrimitiveClass")
        .def_property_readonly("word",
                               [](const spectrum::PrimitiveClass& c) { return group::format_word(c.word); })
        .def_readonly("trace_p", &spectrum::PrimitiveClass::trace_p)
        .def_readonly("trace_q", &spectrum::PrimitiveClass::trace_q)
        .def_readonly("trace", &spectrum::PrimitiveClass::trace_value)
        .def_readonly("length", &spectrum::PrimitiveClass::length)
        .def_readonly("oriented_multiplicity", &spectrum::PrimitiveClass::oriented_multiplicity);

    py::class_<spectrum::LengthSpectrum>(m, "LengthSpectrum")
        .def_readonly("classes", &spectrum::LengthSpectrum::classes)
        .def_readonly("cutoff_L", &spectrum::LengthSpectrum::cutoff_L)
        .def_readonly("volume", &spectrum::LengthSpectrum::volume)
        .def_readonly("exact", &spectrum::LengthSpectrum::exact)
        .def_readonly("base_name", &spectrum::LengthSpectrum::base_name)
        .def("systole", [](const spectrum::LengthSpectrum& s) { return spectrum::systole(s); })
        .def("__len__", [](const spectrum::LengthSpectrum& s) { return s.classes.size(); });

    m.def("enumerate_primitives", &enumerate_catalog, py::arg("base"), py::arg("L"),
          "complete primitive length spectrum of a catalog surface up to L");
    m.def("count_with_iterates", &spectrum::count_with_iterates, py::arg("spectrum"), py::arg("L"));
    m.def("count_primitive", &spectrum::count_primitive, py::arg("spectrum"), py::arg("L"));
    m.def("buser_bound", &spectrum::buser_bound, py::arg("genus"), py::arg("T"), py::arg("spectrum"));
    m.def("length_from_trace", &fuchsian::length_from_trace, py::arg("trace"));
    m.def("save_spectrum", &spectrum::save_file, py::arg("spectrum"), py::arg("path"));
    m.def("load_spectrum", &spectrum::load_file, py::arg("path"));

    // heat
    m.def("identity_term", [](double t) { return heat::identity_term(t); }, py::arg("t"));
    m.def(
        "geodesic_term",
        [](const spectrum::LengthSpectrum& s, double t, double L) {
            return heat::geodesic_term(s, t, L);
        },
        py::arg("spectrum"), py::arg("t"), py::arg("L"));
    m.def("geodesic_tail_bound", &heat::geodesic_tail_bound, py::arg("genus"), py::arg("spectrum"),
          py::arg("t"), py::arg("L"));

    // determinant
    m.def(
        "log_det",
        [](const spectrum::LengthSpectrum& s, double volume, double L, double R, double eta) {
            determinant::DetParams p;
            p.L = L;
            p.R = R;
            p.eta = eta;
            return det_to_dict(determinant::log_det(s, volume, p), volume);
        },
        py::arg("spectrum"), py::arg("volume"), py::arg("L"), py::arg("R"), py::arg("eta"));

    // covers
    py::class_<cover::HomSample>(m, "HomSample")
        .def_property_readonly("perms",
                               [](const cover::HomSample& h) {
                                   std::vector<std::vector<int>> v;
                                   for (const auto& p : h.perms) v.push_back(p.images);
                                   return v;
                               })
        .def_readonly("n", &cover::HomSample::n)
        .def_readonly("sampler_tag", &cover::HomSample::sampler_tag)
        .def_readonly("seed", &cover::HomSample::seed)
        .def("to_json", &cover::HomSample::to_json)
        .def("connected",
             [](const cover::HomSample& h) { return group::is_transitive(h.perms); });

    m.def(
        "sample_hom",
        [](const std::string& base, int n, uint64_t seed) {
            return cover::sample_hom(fuchsian::catalog(base), n, seed);
        },
        py::arg("base"), py::arg("n"), py::arg("seed"));
    m.def(
        "count_homs",
        [](const std::string& base, int n) { return cover::count_homs(fuchsian::catalog(base), n); },
        py::arg("base"), py::arg("n"));
    m.def(
        "lift_spectrum",
        [](const spectrum::LengthSpectrum& base_spec, const cover::HomSample& hom, double L) {
            return cover::lift_spectrum(base_spec, hom, L).spec;
        },
        py::arg("base_spectrum"), py::arg("hom"), py::arg("L"));
    m.def(
        "vz_check",
        [](const spectrum::LengthSpectrum& base_spec, const cover::HomSample& hom, double L) {
            return cover::vz_check(base_spec, hom, L);
        },
        py::arg("base_spectrum"), py::arg("hom"), py::arg("L"));
    m.def(
        "fix_statistics",
        [](const std::string& base, const std::string& word, int q, int n, int samples,
           uint64_t seed) {
            const auto st = cover::fix_statistics(fuchsian::catalog(base),
                                                  group::parse_word(word, 4), q, n, samples, seed);
            py::dict d;
            d["mean"] = st.mean;
            d["std_error"] = st.std_error;
            d["sampler_tag"] = st.sampler_tag;
            return d;
        },
        py::arg("base"), py::arg("word"), py::arg("q"), py::arg("n"), py::arg("samples"),
        py::arg("seed"));

    // bm
    py::class_<bm::OrientedCubicGraph>(m, "OrientedCubicGraph")
        .def_readonly("n", &bm::OrientedCubicGraph::n)
        .def_readonly("pairing", &bm::OrientedCubicGraph::pairing)
        .def_readonly("rotation", &bm::OrientedCubicGraph::rotation);
    m.def("sample_graph", &bm::sample_graph, py::arg("n"), py::arg("seed"));
    m.def(
        "bm_census",
        [](const bm::OrientedCubicGraph& g, double L) {
            std::vector<py::dict> rows;
            for (const auto& e : bm::census(g, L)) {
                py::dict d;
                d["word"] = e.word;
                d["trace"] = e.trace;
                d["length"] = e.length;
                d["count"] = e.count;
                rows.push_back(std::move(d));
            }
            return rows;
        },
        py::arg("graph"), py::arg("L"));
    m.def(
        "bm_face_lengths",
        [](const bm::OrientedCubicGraph& g) {
            const auto f = bm::face_cycles(g);
            return std::make_pair(f.left_lengths, f.right_lengths);
        },
        py::arg("graph"));
    m.def("word_set_WL", &bm::word_set_WL, py::arg("L"));
    m.def(
        "poisson_stats",
        [](int n, double L, int samples, uint64_t seed) {
            std::vector<py::dict> rows;
            for (const auto& r : bm::poisson_stats(n, L, samples, seed)) {
                py::dict d;
                d["word"] = r.word;
                d["length"] = r.length;
                d["mean"] = r.mean;
                d["variance"] = r.variance;
                rows.push_back(std::move(d));
            }
            return rows;
        },
        py::arg("n"), py::arg("L"), py::arg("samples"), py::arg("seed"));
    m.def(
        "sunada_diagnostic",
        [](const cover::HomSample& hom) {
            const auto d = cover::sunada_diagnostic(hom);
            return std::make_pair(d.bound, d.diameter);
        },
        py::arg("hom"));

    m.attr("__version__") = "0.1.0";
}
