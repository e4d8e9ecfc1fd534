#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fracspec/config.hpp"
#include "fracspec/error.hpp"
#include "fracspec/report.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

fracspec::Json read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fracspec::ValidationError({{"$", "cannot read report " + path}});
    try {
        return fracspec::Json::parse(in);
    } catch (const fracspec::Json::parse_error& e) {
        throw fracspec::ValidationError({{"$", path + ": malformed JSON: " + e.what()}});
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral triples on fractals: eigenvalue asymptotics, dimensions and trace functionals"};
    app.require_subcommand(1);

    fracspec::Budget budget;
    bool quiet = false;
    std::string config_path;
    std::string out_dir = "out";
    std::string report_a, report_b;
    std::string compare_out;

    auto* run = app.add_subcommand("run", "Run one experiment and write report.json plus CSV series");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    run->add_option("--budget", budget.entries, "Eigen-entry budget")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--word-budget", budget.words, "Word budget for IFS enumeration")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    run->add_flag("--quiet", quiet, "Print nothing on success");

    auto* compare = app.add_subcommand("compare", "Diff two reports of the same kind");
    compare->add_option("report_a", report_a, "First report.json")->required();
    compare->add_option("report_b", report_b, "Second report.json")->required();
    compare->add_option("--out-dir", compare_out, "Also write compare.json here");
    compare->add_flag("--quiet", quiet, "Print only the significant-difference count");

    auto* schema = app.add_subcommand("schema", "Print the config JSON schema");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*schema) {
            std::cout << fracspec::dump_json(fracspec::config_schema());
            return 0;
        }
        if (*run) {
            const auto config = fracspec::load_config(config_path, budget);
            const auto result = fracspec::run_experiment(config, budget, out_dir);
            if (!quiet)
                for (const auto& f : result.files) std::cout << f.string() << '\n';
            return 0;
        }
        if (*compare) {
            const auto diff = fracspec::compare_reports(read_report(report_a), read_report(report_b));
            const std::string text = fracspec::dump_json(diff);
            if (!compare_out.empty()) {
                std::filesystem::create_directories(compare_out);
                std::ofstream(std::filesystem::path(compare_out) / "compare.json") << text;
            }
            if (quiet) std::cout << diff.at("significant").get<std::size_t>() << '\n';
            else std::cout << text;
            return 0;
        }
    } catch (const fracspec::ValidationError& e) {
        for (const auto& issue : e.issues()) std::cerr << "error: " << issue.path << ": " << issue.message << '\n';
        return kExitValidation;
    } catch (const fracspec::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == fracspec::ErrorCode::KindMismatch ? kExitValidation : kExitNumeric;
    } catch (const fracspec::Json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
