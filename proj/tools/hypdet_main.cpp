// hypdet: length spectra, heat traces, and regularized determinants of
// hyperbolic surfaces, plus random-cover and cubic-graph ensembles.
//
// stdout carries data only; diagnostics go to stderr.  Exit codes:
// 0 success, 1 domain/runtime error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypdet/bm.hpp"
#include "hypdet/constants.hpp"
#include "hypdet/cover.hpp"
#include "hypdet/determinant.hpp"
#include "hypdet/errors.hpp"
#include "hypdet/experiment.hpp"
#include "hypdet/fuchsian.hpp"
#include "hypdet/heat.hpp"
#include "hypdet/rng.hpp"
#include "hypdet/spectrum.hpp"

namespace {

std::string sig_digits(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

hypdet::spectrum::LengthSpectrum load_spectrum_arg(const std::string& path) {
    return hypdet::spectrum::load_file(path);
}

int cmd_constants(int digits) {
    const auto& u = hypdet::constants::universal();
    std::printf("E = %s\n", sig_digits(u.E, digits).c_str());
    std::printf("zeta_prime_minus1 = %s\n", sig_digits(u.zeta_prime_minus1, digits).c_str());
    std::printf("log_A = %s\n", sig_digits(u.log_A, digits).c_str());
    std::printf("euler_gamma = %s\n", sig_digits(u.euler_gamma, digits).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypdet: spectra, heat traces and determinants of hyperbolic surfaces"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "parallelism budget (0 = auto; current build is serial)");

    // constants
    auto* c_const = app.add_subcommand("constants", "print the universal constants");
    int digits = 12;
    c_const->add_option("--digits", digits, "significant digits")->check(CLI::Range(1, 17));

    // enumerate
    auto* c_enum = app.add_subcommand("enumerate", "enumerate the primitive length spectrum");
    std::string base_name = "bolza", out_path;
    double enum_L = 6.0;
    int64_t node_budget = 0;
    c_enum->add_option("--base", base_name, "catalog surface name")->capture_default_str();
    c_enum->add_option("--L", enum_L, "length cutoff")->required();
    c_enum->add_option("--out", out_path, "output spectrum file (default stdout)");
    c_enum->add_option("--node-budget", node_budget, "enumeration ball budget (0 = auto)");

    // spectrum
    auto* c_spec = app.add_subcommand("spectrum", "counting quantities of a stored spectrum");
    std::string spec_path;
    std::vector<double> at_L;
    c_spec->add_option("--spectrum", spec_path, "spectrum file")->required();
    c_spec->add_option("--L", at_L, "lengths at which to report counts (default: cutoff)");

    // heat
    auto* c_heat = app.add_subcommand("heat", "heat-trace ingredients at a given time");
    std::string heat_spec;
    double heat_t = 1.0, heat_L = -1.0;
    c_heat->add_option("--spectrum", heat_spec, "spectrum file")->required();
    c_heat->add_option("--t", heat_t, "heat time")->required();
    c_heat->add_option("--L", heat_L, "geodesic cutoff (default: spectrum cutoff)");

    // det
    auto* c_det = app.add_subcommand("det", "regularized determinant with certified budget");
    std::string det_spec;
    double det_volume = -1.0, det_eta = 0.0, det_L = -1.0, det_R = -1.0;
    c_det->add_option("--spectrum", det_spec, "spectrum file")->required();
    c_det->add_option("--volume", det_volume, "surface volume (default: from the file)");
    c_det->add_option("--eta", det_eta, "trusted spectral-gap lower bound")->required();
    c_det->add_option("--L", det_L, "geodesic cutoff (default: spectrum cutoff)");
    c_det->add_option("--R", det_R, "heat-time cutoff (default: max(40, 10/eta))");

    // cover
    auto* c_cover = app.add_subcommand("cover", "random covers of a catalog surface");
    c_cover->require_subcommand(1);
    auto* cc_sample = c_cover->add_subcommand("sample", "draw a homomorphism to S_n");
    auto* cc_lift = c_cover->add_subcommand("lift", "lift a base spectrum through a cover");
    auto* cc_vz = c_cover->add_subcommand("vz", "both sides of the induction length identity");
    auto* cc_fix = c_cover->add_subcommand("fix-stats", "fixed-point statistics of phi(gamma^q)");
    std::string cover_base = "bolza", cover_hom_path, cover_spec_path, cover_word = "a1";
    int cover_n = 2, cover_q = 1, cover_samples = 1000;
    uint64_t cover_seed = 1;
    double cover_L = 6.0;
    for (auto* sc : {cc_sample, cc_lift, cc_vz, cc_fix})
        sc->add_option("--base", cover_base, "catalog surface name")->capture_default_str();
    cc_sample->add_option("--n", cover_n, "degree")->required();
    cc_sample->add_option("--seed", cover_seed, "seed")->capture_default_str();
    cc_lift->add_option("--hom", cover_hom_path, "homomorphism JSON file")->required();
    cc_lift->add_option("--L", cover_L, "cutoff")->required();
    cc_lift->add_option("--out", out_path, "output spectrum file (default stdout)");
    cc_vz->add_option("--hom", cover_hom_path, "homomorphism JSON file")->required();
    cc_vz->add_option("--L", cover_L, "cutoff")->required();
    cc_fix->add_option("--word", cover_word, "base word, e.g. a1")->capture_default_str();
    cc_fix->add_option("--q", cover_q, "iterate exponent")->capture_default_str();
    cc_fix->add_option("--n", cover_n, "degree")->required();
    cc_fix->add_option("--samples", cover_samples, "number of samples")->capture_default_str();
    cc_fix->add_option("--seed", cover_seed, "master seed")->capture_default_str();

    // bm
    auto* c_bm = app.add_subcommand("bm", "random oriented cubic graphs (configuration model)");
    c_bm->require_subcommand(1);
    auto* bm_sample = c_bm->add_subcommand("sample", "sample a graph and report its face cycles");
    auto* bm_census = c_bm->add_subcommand("census", "closed-walk word census of one sample");
    auto* bm_stats = c_bm->add_subcommand("stats", "Poisson moment table across samples");
    int bm_n = 10, bm_samples = 100;
    uint64_t bm_seed = 1;
    double bm_L = 3.8;
    for (auto* sc : {bm_sample, bm_census, bm_stats}) {
        sc->add_option("--n", bm_n, "half the vertex count")->required();
        sc->add_option("--seed", bm_seed, "seed")->capture_default_str();
    }
    bm_census->add_option("--L", bm_L, "length cutoff")->capture_default_str();
    bm_stats->add_option("--L", bm_L, "length cutoff")->capture_default_str();
    bm_stats->add_option("--samples", bm_samples, "number of samples")->capture_default_str();

    // experiment
    auto* c_exp = app.add_subcommand("experiment", "reproducible ensemble experiments");
    c_exp->require_subcommand(1);
    auto* exp_run = c_exp->add_subcommand("run", "run a concentration experiment from a config");
    auto* exp_hyp =
        c_exp->add_subcommand("hypothesis", "hypothesis-frequency report from a config");
    std::string exp_config, exp_out = "experiment-out";
    exp_run->add_option("--config", exp_config, "config JSON file")->required();
    exp_run->add_option("--out", exp_out, "output directory")->capture_default_str();
    exp_hyp->add_option("--config", exp_config, "config JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*c_const) return cmd_constants(digits);

        if (*c_enum) {
            const auto base = hypdet::fuchsian::catalog(base_name);
            const auto spec = hypdet::fuchsian::enumerate_primitives(base, enum_L, node_budget);
            if (out_path.empty()) {
                hypdet::spectrum::save(spec, std::cout);
            } else {
                hypdet::spectrum::save_file(spec, out_path);
                std::fprintf(stderr, "wrote %zu classes to %s\n", spec.classes.size(),
                             out_path.c_str());
            }
            return 0;
        }

        if (*c_spec) {
            const auto spec = load_spectrum_arg(spec_path);
            if (at_L.empty()) at_L.push_back(spec.cutoff_L);
            std::printf("L,N,N0,systole\n");
            for (double L : at_L) {
                std::printf("%.17g,%lld,%lld,%.17g\n", L,
                            static_cast<long long>(hypdet::spectrum::count_with_iterates(spec, L)),
                            static_cast<long long>(hypdet::spectrum::count_primitive(spec, L)),
                            spec.classes.empty() ? 0.0 : hypdet::spectrum::systole(spec));
            }
            return 0;
        }

        if (*c_heat) {
            const auto spec = load_spectrum_arg(heat_spec);
            const double L = heat_L > 0 ? heat_L : spec.cutoff_L;
            const int genus = spec.genus ? *spec.genus : 2;
            const double it = hypdet::heat::identity_term(heat_t);
            const double st = hypdet::heat::geodesic_term(spec, heat_t, L);
            const double tail = hypdet::heat::geodesic_tail_bound(genus, spec, heat_t, L);
            const double trace_est = spec.volume * it / (4.0 * std::acos(-1.0)) + st;
            std::printf("t,identity_term,geodesic_term,tail_bound,trace_estimate\n");
            std::printf("%.17g,%.17g,%.17g,%.17g,%.17g\n", heat_t, it, st, tail, trace_est);
            return 0;
        }

        if (*c_det) {
            const auto spec = load_spectrum_arg(det_spec);
            const double volume = det_volume > 0 ? det_volume : spec.volume;
            hypdet::determinant::DetParams params;
            params.eta = det_eta;
            params.L = det_L > 0 ? det_L : spec.cutoff_L;
            params.R = det_R > 0 ? det_R : std::max(40.0, 10.0 / det_eta);
            const auto det = hypdet::determinant::log_det(spec, volume, params);
            nlohmann::json j;
            j["schema_version"] = 1;
            j["value"] = det.value;
            j["error"] = det.error;
            j["budget"] = det.budget;
            j["warnings"] = det.warnings;
            j["volume"] = volume;
            j["normalized"] = det.value / volume;
            std::printf("%s\n", j.dump().c_str());
            return 0;
        }

        if (*cc_sample) {
            const auto base = hypdet::fuchsian::catalog(cover_base);
            const auto hom = hypdet::cover::sample_hom(base, cover_n, cover_seed);
            std::printf("%s\n", hom.to_json().c_str());
            return 0;
        }
        if (*cc_lift || *cc_vz) {
            const auto base = hypdet::fuchsian::catalog(cover_base);
            std::ifstream in(cover_hom_path);
            if (!in) throw std::runtime_error("cannot open " + cover_hom_path);
            std::stringstream ss;
            ss << in.rdbuf();
            const auto hom = hypdet::cover::HomSample::from_json(ss.str());
            const auto base_spec = hypdet::fuchsian::enumerate_primitives(base, cover_L);
            if (*cc_lift) {
                const auto cs = hypdet::cover::lift_spectrum(base_spec, hom, cover_L);
                if (out_path.empty())
                    hypdet::spectrum::save(cs.spec, std::cout);
                else
                    hypdet::spectrum::save_file(cs.spec, out_path);
            } else {
                const auto [lhs, rhs] = hypdet::cover::vz_check(base_spec, hom, cover_L);
                std::printf("lhs,rhs,abs_diff\n%.17g,%.17g,%.3g\n", lhs, rhs, std::abs(lhs - rhs));
            }
            return 0;
        }
        if (*cc_fix) {
            const auto base = hypdet::fuchsian::catalog(cover_base);
            const auto word = hypdet::group::parse_word(cover_word, 4);
            const auto st = hypdet::cover::fix_statistics(base, word, cover_q, cover_n,
                                                          cover_samples, cover_seed);
            std::printf("mean,std_error,sampler_tag\n%.17g,%.17g,%s\n", st.mean, st.std_error,
                        st.sampler_tag.c_str());
            return 0;
        }

        if (*bm_sample) {
            const auto g = hypdet::bm::sample_graph(bm_n, bm_seed);
            const auto f = hypdet::bm::face_cycles(g);
            std::printf("kind,lengths\n");
            auto row = [](const char* kind, const std::vector<int>& v) {
                std::printf("%s,", kind);
                for (size_t i = 0; i < v.size(); ++i) std::printf("%s%d", i ? " " : "", v[i]);
                std::printf("\n");
            };
            row("left", f.left_lengths);
            row("right", f.right_lengths);
            return 0;
        }
        if (*bm_census) {
            const auto g = hypdet::bm::sample_graph(bm_n, bm_seed);
            std::printf("word,trace,length,count\n");
            for (const auto& e : hypdet::bm::census(g, bm_L))
                std::printf("%s,%lld,%.12g,%lld\n", e.word.c_str(),
                            static_cast<long long>(e.trace), e.length,
                            static_cast<long long>(e.count));
            return 0;
        }
        if (*bm_stats) {
            std::printf("word,trace,length,mean,variance\n");
            for (const auto& r : hypdet::bm::poisson_stats(bm_n, bm_L, bm_samples, bm_seed))
                std::printf("%s,%lld,%.12g,%.12g,%.12g\n", r.word.c_str(),
                            static_cast<long long>(r.trace), r.length, r.mean, r.variance);
            return 0;
        }

        if (*exp_run || *exp_hyp) {
            std::ifstream in(exp_config);
            if (!in) throw std::runtime_error("cannot open " + exp_config);
            std::stringstream ss;
            ss << in.rdbuf();
            const auto config = hypdet::experiment::ExperimentConfig::from_json(ss.str());
            if (*exp_run) {
                hypdet::experiment::run_to_directory(config, exp_out);
                std::fprintf(stderr, "experiment written to %s\n", exp_out.c_str());
            } else {
                const auto rows = hypdet::experiment::run_hypothesis_report(config);
                std::printf("%s", hypdet::experiment::hypothesis_to_csv(rows).c_str());
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    std::fprintf(stderr, "error: no subcommand dispatched\n");
    return 2;
}
