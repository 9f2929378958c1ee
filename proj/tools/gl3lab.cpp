// gl3lab: runs the verification suites and prints the family and moment tables.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage, configuration or I/O error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gl3lab/cli_report.hpp"
#include "gl3lab/errors.hpp"
#include "gl3lab/lfunctions.hpp"
#include "gl3lab/maass_io.hpp"
#include "gl3lab/spectral_params.hpp"
#include "json.hpp"

using namespace gl3lab;

namespace {

void write_to(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

std::string families_table(const LanglandsTriple& t, const std::vector<FamilyTuple>& fams) {
    std::ostringstream o;
    o << "triple (" << t.alpha << ", " << t.beta << ", " << t.gamma << ")  T = " << t.T() << "  tuples "
      << fams.size() << "\n";
    o << std::setw(5) << "index" << std::setw(6) << "case" << std::setw(10) << "T0" << std::setw(9) << "R"
      << std::setw(9) << "D" << std::setw(9) << "S" << std::setw(12) << "Q" << std::setw(6) << "sign" << std::setw(8)
      << "U" << std::setw(8) << "V" << "\n";
    for (size_t i = 0; i < fams.size(); ++i) {
        const auto& f = fams[i];
        o << std::setw(5) << i << std::setw(6) << f.case_label << std::setw(10) << std::setprecision(5) << f.t0
          << std::setw(9) << f.r << std::setw(9) << f.d << std::setw(9) << f.s << std::setw(12) << std::setprecision(4)
          << f.q << std::setw(6) << f.sign << std::setw(8) << f.u << std::setw(8) << f.v << "\n";
    }
    if (!fams.empty()) {
        auto fit = fit_family_constants(t, fams);
        o << "tuples / log^2 T = " << fit.count_over_log2T << "; S ratio [" << fit.min_s_ratio << ", "
          << fit.max_s_ratio << "]; D ratio [" << fit.min_d_ratio << ", " << fit.max_d_ratio << "]; Q ratio ["
          << fit.min_q_ratio << ", " << fit.max_q_ratio << "]\n";
    }
    return o.str();
}

nlohmann::json families_json(const LanglandsTriple& t, const std::vector<FamilyTuple>& fams) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& f : fams)
        rows.push_back({{"case", f.case_label}, {"t0", f.t0}, {"r", f.r}, {"d", f.d}, {"s", f.s}, {"q", f.q},
                        {"sign", f.sign}, {"u", f.u}, {"v", f.v}, {"table_d", f.table_d}, {"table_s", f.table_s}});
    return {{"triple", {t.alpha, t.beta, t.gamma}}, {"families", rows}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GL(3) restriction-problem verification lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::vector<std::string> suites;
    std::string config_file, json_path, goldens_path;
    std::vector<std::string> data_dirs;
    std::uint64_t seed = 1;
    double epsilon = 0.1;
    bool update_goldens = false, timings = false;
    auto* verify = app.add_subcommand("verify", "run verification suites ('all' selects every suite)");
    verify->add_option("suite", suites, "suite names; the config file's `suites` when omitted");
    verify->add_option("--config", config_file, "key=value configuration file")->check(CLI::ExistingFile);
    auto* seed_opt = verify->add_option("--seed", seed, "random seed");
    auto* eps_opt = verify->add_option("--epsilon", epsilon, "the exponent used for every T^epsilon");
    verify->add_option("--json", json_path, "write the machine report here ('-' for stdout)");
    verify->add_option("--data", data_dirs, "data directory (holds maass/ and goldens.json)");
    verify->add_option("--goldens", goldens_path, "golden constants file");
    verify->add_flag("--update-goldens", update_goldens, "record the fitted constants as the new goldens");
    verify->add_flag("--timings", timings, "include runtimes in both reports");

    double alpha = 0, beta = 0, gamma = 0;
    std::string fam_json;
    auto* families = app.add_subcommand("families", "list the family tuples for a triple");
    families->add_option("--alpha", alpha)->required();
    families->add_option("--beta", beta)->required();
    families->add_option("--gamma", gamma)->required();
    families->add_option("--json", fam_json, "write the tuples as JSON ('-' for stdout)");

    std::string moment_dir;
    long family_index = 0;
    double q_cap = 400.0;
    auto* moment = app.add_subcommand("moment", "spectral moment of the symmetric square of the first form in DIR");
    moment->add_option("--data", moment_dir, "directory of Maass form files")->required()->check(CLI::ExistingDirectory);
    moment->add_option("--family-index", family_index, "index into the family list of the lifted triple")->required();
    moment->add_option("--q-cap", q_cap, "conductor cap of the smooth window");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify) {
            RunConfig cfg;
            if (!config_file.empty()) cfg = load_config(config_file, cfg);
            if (suites.size() == 1 && suites[0] == "all") cfg.suites = known_suites();
            else if (!suites.empty()) cfg.suites = suites;
            if (*seed_opt) cfg.seed = seed;
            if (*eps_opt) cfg.epsilon = epsilon;
            if (!data_dirs.empty()) cfg.data_paths.assign(data_dirs.begin(), data_dirs.end());
            cfg.precision = precision_from_env();
            if (!json_path.empty()) {
                cfg.output = json_path;
                cfg.emit_machine_readable = true;
            }
            cfg.validate();

            const std::filesystem::path gpath =
                goldens_path.empty() ? cfg.data_dir() / "goldens.json" : std::filesystem::path(goldens_path);
            GoldenStore goldens = GoldenStore::load(gpath);
            GoldenStore recorded = goldens;
            VerificationReport rep = run_suites(cfg, goldens, update_goldens ? &recorded : nullptr);
            if (update_goldens) {
                recorded.save(gpath);
                std::cerr << "goldens written to " << gpath.string() << "\n";
            }
            const std::string out = cfg.output.empty() ? "-" : cfg.output;
            // with the machine report on stdout the table goes to stderr
            (cfg.emit_machine_readable && out == "-" ? std::cerr : std::cout)
                << emit_report(rep, ReportFormat::human, timings);
            if (cfg.emit_machine_readable) write_to(out, emit_report(rep, ReportFormat::machine, timings));
            return rep.exit_code();
        }
        if (*families) {
            LanglandsTriple t = make_triple(alpha, beta, gamma);
            if (std::abs(t.sum()) > 1e-9) throw UsageError("the parameters must sum to zero");
            auto fams = enumerate_families(t);
            std::cout << families_table(t, fams);
            if (!fam_json.empty()) write_to(fam_json, families_json(t, fams).dump(2) + "\n");
            return 0;
        }
        if (*moment) {
            auto forms = ingest_maass_data(moment_dir);
            if (forms.empty()) throw IoError("no Maass form in " + moment_dir);
            const long n_max = std::min<long>(600, forms.front().p_max());
            GL3CoefficientTable table = sym2_coeffs(forms.front(), n_max);
            auto fams = enumerate_families(table.triple());
            if (family_index < 0 || family_index >= static_cast<long>(fams.size()))
                throw UsageError("family index must lie in [0, " + std::to_string(fams.size()) + ")");
            const FamilyTuple& f = fams[family_index];
            auto w = afe_window(q_cap);
            if (w.support_max() > n_max) throw UsageError("the window needs coefficients beyond the data; lower --q-cap");
            auto rep = moment_spectral(f, forms, table, w);
            std::cout << "lift of " << forms.front().source_id << " (t = " << forms.front().t_j << "), triple ("
                      << table.triple().alpha << ", " << table.triple().beta << ", " << table.triple().gamma << ")\n"
                      << "family " << family_index << " case " << f.case_label << ": T0 = " << f.t0 << ", R = " << f.r
                      << ", D = " << f.d << ", S = " << f.s << ", Q = " << f.q << "\n"
                      << "window support n <= " << w.support_max() << ", forms used " << rep.forms_used << "\n"
                      << std::setprecision(10) << "moment = " << rep.value << "\ncomparison Q^{1/2} |A(1,1)|^2 = "
                      << rep.comparison << "\n";
            if (!rep.warning.empty()) std::cout << "warning: " << rep.warning << "\n";
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "gl3lab: parse error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "gl3lab: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "gl3lab: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "gl3lab: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
