// hopf-spectra: exact and floating spectral analysis of the Hopf map's
// second-variation operators, with JSON/CSV/pretty reporting.

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "hopf/report.hpp"

namespace {

using namespace hopf;

struct OutputSink {
    std::string format = "pretty";
    std::string path;

    int emit(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << "\n";
            return 0;
        }
        std::ofstream out(path);
        if (!out) {
            std::cerr << "error: cannot write to '" << path << "'\n";
            return 2;
        }
        out << text;
        return out.good() ? 0 : 2;
    }
};

int worker_cap() {
    if (const char* env = std::getenv("HOPF_SPECTRA_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Per-degree bienergy scans, parallelized across worker threads; each
/// worker keeps its own cache so the per-degree jobs stay independent.
std::map<int, SpectrumReport> scan_iphi_range(int lo, int hi, int workers) {
    std::map<int, SpectrumReport> out;
    if (hi < lo) return out;
    if (workers <= 1) {
        OperatorCache cache;
        for (int k = lo; k <= hi; ++k) out.emplace(k, iphi_scan_degree(k, cache));
        return out;
    }
    std::vector<SpectrumReport> results(hi - lo + 1);
    std::atomic<int> next{lo};
    auto work = [&]() {
        OperatorCache cache;
        for (int k = next.fetch_add(1); k <= hi; k = next.fetch_add(1))
            results[k - lo] = iphi_scan_degree(k, cache);
    };
    std::vector<std::thread> pool;
    int n = std::min(workers, hi - lo + 1);
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (int k = lo; k <= hi; ++k) out.emplace(k, std::move(results[k - lo]));
    return out;
}

SpectrumReport float_spectrum_report(const OperatorAssembly& a) {
    SpectrumReport rep;
    rep.tag = a.tag;
    rep.k = a.k;
    rep.dim = a.mat.rows();
    rep.method = "float";
    auto clusters = cluster_eigenvalues(generalized_float_spectrum(a.mat, a.gram));
    for (const auto& c : clusters) {
        rep.eigenvalues.push_back(EigenEntry::floating(c.value, c.multiplicity));
        if (c.value < -1e-9) rep.index += c.multiplicity;
        if (std::fabs(c.value) <= 1e-9) rep.nullity += c.multiplicity;
    }
    rep.notes.push_back("floating counts only; run with --exact for certified values");
    return rep;
}

std::string checks_pretty(const std::string& title, const std::vector<NamedCheck>& checks) {
    std::string out = title + "\n";
    for (const auto& c : checks) {
        out += std::string("  [") + (c.pass ? "PASS" : "FAIL") + "] " + c.name;
        if (!c.detail.empty()) out += "  (" + c.detail + ")";
        out += "\n";
    }
    return out;
}

std::string checks_csv(const std::vector<NamedCheck>& checks) {
    std::string out;
    for (const auto& c : checks) out += "\"" + c.name + "\"," + (c.pass ? "1" : "0") + "\n";
    return out;
}

std::vector<NamedCheck> geometry_as_named(const GeometryReport& r) {
    std::vector<NamedCheck> out;
    for (const auto& c : r.checks) out.push_back({c.name, c.pass, c.detail});
    return out;
}

int emit_spectrum(const OutputSink& sink, const SpectrumReport& rep,
                  const Matrix<QSqrt2>* matrix) {
    if (sink.format == "json") {
        Json j = to_json(rep);
        if (matrix) j["matrix"] = matrix_to_json(*matrix);
        return sink.emit(j.dump(2));
    }
    if (sink.format == "csv") return sink.emit(spectrum_csv(rep));
    std::string text = spectrum_pretty(rep);
    if (matrix) {
        text += "matrix:\n";
        for (size_t i = 0; i < matrix->rows(); ++i) {
            text += "  ";
            for (size_t j = 0; j < matrix->cols(); ++j) {
                text += (*matrix)(i, j).str();
                if (j + 1 < matrix->cols()) text += "  ";
            }
            text += "\n";
        }
    }
    return sink.emit(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact spectral analysis of the Hopf map's stability operators"};
    app.require_subcommand(1);
    app.fallthrough();

    OutputSink sink;
    app.add_option("--format", sink.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "pretty"}))
        ->capture_default_str();
    app.add_option("--output", sink.path, "write the report to a file instead of stdout");

    auto* cmd_geometry = app.add_subcommand("check-geometry",
                                            "submersion identities and the connection table");

    int vs_k = 2;
    std::string vs_method = "both";
    bool vs_dump_chains = false;
    auto* cmd_vertical = app.add_subcommand("vertical-spectrum",
                                            "spectrum of the vertical Laplacian on H^k");
    cmd_vertical->add_option("--k", vs_k, "degree")->required()->check(CLI::Range(0, 64));
    cmd_vertical->add_option("--method", vs_method, "computation route")
        ->check(CLI::IsMember({"bruteforce", "sl2", "both"}))
        ->capture_default_str();
    cmd_vertical->add_flag("--dump-chains", vs_dump_chains,
                           "also emit the lowering chains of the weight decomposition");

    int jac_k = 1;
    bool jac_exact = false, jac_print = false;
    auto* cmd_jacobi = app.add_subcommand("jacobi", "Jacobi operator on the degree-k sections");
    cmd_jacobi->add_option("--k", jac_k, "degree")->required()->check(CLI::Range(0, 32));
    cmd_jacobi->add_flag("--exact", jac_exact, "certify eigenvalues exactly");
    cmd_jacobi->add_flag("--print-matrix", jac_print, "include the assembled matrix");

    int bi_k = 1;
    bool bi_exact = false, bi_print = false;
    auto* cmd_bienergy =
        app.add_subcommand("bienergy", "bienergy Hessian on the degree-k sections");
    cmd_bienergy->add_option("--k", bi_k, "degree")->required()->check(CLI::Range(0, 32));
    cmd_bienergy->add_flag("--exact", bi_exact, "certify eigenvalues exactly");
    cmd_bienergy->add_flag("--print-matrix", bi_print, "include the assembled matrix");

    std::string idx_operator = "jpsi";
    int idx_kmax = 2;
    auto* cmd_index = app.add_subcommand("index", "index and nullity tally up to a degree");
    cmd_index->add_option("--operator", idx_operator, "which operator")
        ->check(CLI::IsMember({"jpsi", "ipsi", "iphi"}))
        ->capture_default_str();
    cmd_index->add_option("--kmax", idx_kmax, "largest degree scanned")
        ->required()
        ->check(CLI::Range(2, 16));

    auto* cmd_kernel = app.add_subcommand("kernel", "geometric description of ker J");

    int basic_kmax = 4;
    auto* cmd_basic =
        app.add_subcommand("basic", "bienergy Hessian restricted to the pullback subspace");
    cmd_basic->add_option("--kmax", basic_kmax, "largest (even) degree scanned")
        ->check(CLI::Range(4, 12))
        ->capture_default_str();

    auto* cmd_verify =
        app.add_subcommand("verify-paper", "run every reproduction of the published tables");

    long oracle_samples = 10000000;
    uint64_t oracle_seed = 12345;
    auto* cmd_oracle =
        app.add_subcommand("oracle-check", "Monte-Carlo validation of the moment formula");
    cmd_oracle->add_option("--samples", oracle_samples, "sample count")
        ->check(CLI::Range(static_cast<long>(1000), static_cast<long>(1000000000)))
        ->capture_default_str();
    cmd_oracle->add_option("--seed", oracle_seed, "random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        OperatorCache cache;

        if (*cmd_geometry) {
            GeometryReport sub = submersion_checks(), conn = connection_table_report();
            bool pass = sub.all_pass() && conn.all_pass();
            int rc;
            if (sink.format == "json") {
                Json j;
                j["pass"] = pass;
                j["submersion"] = to_json(sub);
                j["connection"] = to_json(conn);
                rc = sink.emit(j.dump(2));
            } else if (sink.format == "csv") {
                rc = sink.emit(checks_csv(geometry_as_named(sub)) +
                               checks_csv(geometry_as_named(conn)));
            } else {
                rc = sink.emit(checks_pretty("submersion identities", geometry_as_named(sub)) +
                               checks_pretty("connection table", geometry_as_named(conn)));
            }
            return rc != 0 ? rc : (pass ? 0 : 1);
        }

        if (*cmd_vertical) {
            std::vector<RationalEigenvalue> spec;
            if (vs_method == "bruteforce")
                spec = vertical_spectrum_bruteforce(vs_k, cache);
            else if (vs_method == "sl2")
                spec = vertical_spectrum_via_sl2(vs_k);
            else
                spec = vertical_spectrum_both(vs_k, cache);
            SpectrumReport rep;
            rep.k = vs_k;
            rep.dim = static_cast<size_t>((vs_k + 1) * (vs_k + 1));
            rep.method = "vertical-" + vs_method;
            for (const auto& e : spec) {
                rep.eigenvalues.push_back(EigenEntry::exact_value(QSqrt2(e.value), e.multiplicity));
                if (e.value.is_zero()) rep.nullity += e.multiplicity;
            }
            if (sink.format == "json") {
                Json j;
                j["k"] = vs_k;
                j["method"] = vs_method;
                j["eigenvalues"] = Json::array();
                for (const auto& e : rep.eigenvalues) j["eigenvalues"].push_back(to_json(e));
                if (vs_dump_chains) {
                    Json chains = Json::array();
                    for (const auto& c : decompose(vs_k).submodules) {
                        Json one = Json::array();
                        for (const auto& v : c.vectors) one.push_back(format_cpoly(v));
                        chains.push_back(one);
                    }
                    j["chains"] = chains;
                }
                return sink.emit(j.dump(2));
            }
            if (sink.format == "csv") {
                std::string out;
                for (const auto& e : rep.eigenvalues)
                    out += "vertical," + std::to_string(vs_k) + "," + e.exact.str() + "," +
                           std::to_string(e.multiplicity) + "\n";
                return sink.emit(out);
            }
            std::string text = "vertical Laplacian on H^" + std::to_string(vs_k) + " (" +
                               vs_method + ")\n";
            for (const auto& e : rep.eigenvalues)
                text += "  " + e.exact.str() + "   x" + std::to_string(e.multiplicity) + "\n";
            if (vs_dump_chains) {
                text += "chains:\n";
                for (const auto& c : decompose(vs_k).submodules) {
                    text += "  n=" + std::to_string(c.n) + ":\n";
                    for (const auto& v : c.vectors) text += "    " + format_cpoly(v) + "\n";
                }
            }
            return sink.emit(text);
        }

        if (*cmd_jacobi) {
            OperatorAssembly a = assemble_J_psi(jac_k, cache);
            SpectrumReport rep =
                jac_exact ? jpsi_spectrum_exact(jac_k, cache) : float_spectrum_report(a);
            return emit_spectrum(sink, rep, jac_print ? &a.mat : nullptr);
        }

        if (*cmd_bienergy) {
            OperatorAssembly a = assemble_I_phi(bi_k, cache);
            SpectrumReport rep;
            if (!bi_exact)
                rep = float_spectrum_report(a);
            else if (bi_k <= 2)
                rep = iphi_spectrum_exact_small(bi_k, cache);
            else
                rep = iphi_scan_degree(bi_k, cache);
            return emit_spectrum(sink, rep, bi_print ? &a.mat : nullptr);
        }

        if (*cmd_index) {
            OpTag tag = idx_operator == "jpsi"   ? OpTag::Jpsi
                        : idx_operator == "ipsi" ? OpTag::Ipsi
                                                 : OpTag::Iphi;
            std::map<int, SpectrumReport> scans;
            if (tag == OpTag::Iphi && idx_kmax >= 3)
                scans = scan_iphi_range(3, idx_kmax, worker_cap());
            IndexNullityReport rep = index_nullity_report(tag, idx_kmax, cache, &scans);
            if (sink.format == "json") return sink.emit(to_json(rep).dump(2));
            if (sink.format == "csv") {
                std::string out;
                for (const auto& s : rep.per_degree) out += spectrum_csv(s);
                return sink.emit(out);
            }
            std::string text = "operator " + to_string(tag) + ", scanned k <= " +
                               std::to_string(rep.kmax) + "\n";
            for (const auto& s : rep.per_degree) text += spectrum_pretty(s);
            text += "total index " + std::to_string(rep.index) + ", nullity " +
                    std::to_string(rep.nullity) + (rep.complete ? " (complete)" : "") + "\n";
            for (const auto& n : rep.notes) text += "note: " + n + "\n";
            return sink.emit(text);
        }

        if (*cmd_kernel) {
            CheckReport rep = kernel_characterization(cache);
            int rc;
            if (sink.format == "json")
                rc = sink.emit(to_json(rep).dump(2));
            else if (sink.format == "csv")
                rc = sink.emit(checks_csv(rep.checks));
            else
                rc = sink.emit(checks_pretty("kernel of the Jacobi operator", rep.checks));
            return rc != 0 ? rc : (rep.all_pass() ? 0 : 1);
        }

        if (*cmd_basic) {
            if (basic_kmax % 2) {
                std::cerr << "error: --kmax must be even\n";
                return 2;
            }
            BasicSubspaceReport rep = basic_subspace_spectrum(basic_kmax, cache);
            bool pass = rep.invariant && rep.section_checks.all_pass();
            int rc;
            if (sink.format == "json") {
                rc = sink.emit(to_json(rep).dump(2));
            } else if (sink.format == "csv") {
                std::string out;
                for (const auto& d : rep.per_degree)
                    out += "basic," + std::to_string(d.degree) + ",dim=" +
                           std::to_string(d.dim) + ",neg=" +
                           std::to_string(d.inertia_exact.negative) + ",zero=" +
                           std::to_string(d.inertia_exact.zero) + "\n";
                rc = sink.emit(out);
            } else {
                std::string text = "bienergy Hessian restricted to the pullback subspace\n";
                for (const auto& d : rep.per_degree)
                    text += "  degree " + std::to_string(d.degree) + ": dim " +
                            std::to_string(d.dim) + ", negative " +
                            std::to_string(d.inertia_exact.negative) + ", zero " +
                            std::to_string(d.inertia_exact.zero) + ", positive " +
                            std::to_string(d.inertia_exact.positive) + "\n";
                text += "restricted index " + std::to_string(rep.index) + ", nullity " +
                        std::to_string(rep.nullity) + "\n";
                text += checks_pretty("kernel sections", rep.section_checks.checks);
                rc = sink.emit(text);
            }
            return rc != 0 ? rc : (pass ? 0 : 1);
        }

        if (*cmd_verify) {
            ReproductionSuiteResult suite = verify_paper(cache);
            int rc;
            if (sink.format == "json") {
                rc = sink.emit(to_json(suite).dump(2));
            } else if (sink.format == "csv") {
                std::string out;
                for (const auto& c : suite.checks)
                    out += "\"" + c.name + "\"," + c.anchor + "," + (c.pass ? "1" : "0") + "\n";
                rc = sink.emit(out);
            } else {
                std::string text;
                for (const auto& c : suite.checks) {
                    text += std::string("[") + (c.pass ? "PASS" : "FAIL") + "] " + c.name +
                            "  {" + c.anchor + "}";
                    if (!c.pass)
                        text += "  expected " + c.expected + ", computed " + c.computed;
                    text += "\n";
                }
                text += suite.all_pass() ? "all reproduction checks passed\n"
                                         : "REPRODUCTION FAILURES PRESENT\n";
                rc = sink.emit(text);
            }
            return rc != 0 ? rc : (suite.all_pass() ? 0 : 1);
        }

        if (*cmd_oracle) {
            OracleCheckResult res = oracle_check(oracle_samples, oracle_seed);
            int rc;
            if (sink.format == "json") {
                rc = sink.emit(to_json(res).dump(2));
            } else if (sink.format == "csv") {
                std::string out;
                for (const auto& e : res.entries)
                    out += std::to_string(e.alpha[0]) + ":" + std::to_string(e.alpha[1]) + ":" +
                           std::to_string(e.alpha[2]) + ":" + std::to_string(e.alpha[3]) + "," +
                           e.exact.str() + "," + float_str(e.mc_mean) + "," +
                           float_str(e.mc_std_error) + "," + (e.within_3_sigma ? "1" : "0") +
                           "\n";
                rc = sink.emit(out);
            } else {
                std::string text = "moment oracle, " + std::to_string(res.samples) +
                                   " samples, seed " + std::to_string(res.seed) + "\n";
                for (const auto& e : res.entries)
                    text += std::string("  [") + (e.within_3_sigma ? "PASS" : "FAIL") + "] E[x^(" +
                            std::to_string(e.alpha[0]) + "," + std::to_string(e.alpha[1]) + "," +
                            std::to_string(e.alpha[2]) + "," + std::to_string(e.alpha[3]) +
                            ")] = " + e.exact.str() + "  mc " + float_str(e.mc_mean, 8) +
                            " +- " + float_str(e.mc_std_error, 3) + "\n";
                rc = sink.emit(text);
            }
            return rc != 0 ? rc : (res.all_pass() ? 0 : 1);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
