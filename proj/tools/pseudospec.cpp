#include <iostream>

#include <CLI11.hpp>

#include "pseudospec/cli.hpp"

int main(int argc, char** argv) {
    using namespace pseudospec;

    CLI::App app{"Block diagonalization, pseudo-Hermiticity certificates and symmetry synthesis"};
    app.require_subcommand(1);

    AnalyzeOptions analyze;
    double tol_cluster = 0, tol_pair = 0, tol_real = 0;
    auto* a = app.add_subcommand("analyze", "Certify a matrix read from a JSON file");
    a->add_option("input", analyze.input, "Matrix file {rows, cols, entries: [[re, im], ...]}")->required();
    auto* oc = a->add_option("--tol-cluster", tol_cluster, "Eigenvalue cluster tolerance, relative to ||H||");
    auto* op = a->add_option("--tol-pair", tol_pair, "Conjugate pairing tolerance");
    auto* orl = a->add_option("--tol-real", tol_real, "Real-axis tolerance");
    a->add_option("--json-out", analyze.json_out, "Write the certificate here instead of stdout");

    ScatterCommand scatter;
    auto* s = app.add_subcommand("scatter-sweep", "Transfer-matrix evolution and certificates along x");
    s->add_option("--potential", scatter.potential, "rectangular:v0,a,b | sampled:path")->required();
    s->add_option("--k", scatter.k, "Wavenumber")->required();
    s->add_option("--x-range", scatter.x_range, "a,b")->capture_default_str();
    s->add_option("--samples", scatter.samples, "Number of x samples")->capture_default_str();
    s->add_option("--steps", scatter.steps, "RK4 steps over the full range")->capture_default_str();
    s->add_option("--csv-out", scatter.csv_out, "Output path (default stdout)");

    ModelCommand model;
    auto* m = app.add_subcommand("model-sweep", "Sweep varpi for the truncated two-component model");
    m->add_option("--lambdas", model.lambdas, "Comma-separated, strictly increasing, positive")->required();
    m->add_option("--varpi-range", model.varpi_range, "a,b")->capture_default_str();
    m->add_option("--samples", model.samples, "Number of varpi samples")->capture_default_str();
    m->add_option("--csv-out", model.csv_out, "Output path (default stdout)");
    m->add_flag("--compare-closed-form", model.compare_closed_form, "Append deviations from the closed forms");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (a->parsed()) {
            if (*oc) analyze.tol_cluster = tol_cluster;
            if (*op) analyze.tol_pair = tol_pair;
            if (*orl) analyze.tol_real = tol_real;
            return cmd_analyze(analyze, std::cout, std::cerr);
        }
        if (s->parsed()) return cmd_scatter_sweep(scatter, std::cout, std::cerr);
        return cmd_model_sweep(model, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
