#pragma once

// Command implementations behind the pseudospec executable. Argument parsing
// lives in the tool; these functions take parsed options and streams so they
// can be exercised directly.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pseudospec/io.hpp"
#include "pseudospec/sweep.hpp"

namespace pseudospec {

enum ExitCode : int {
    kExitPseudoHermitian = 0,
    kExitNotPseudoHermitian = 1,
    kExitInconclusive = 2,
    kExitInputError = 3,
};

inline int exit_code_for(Verdict v) {
    switch (v) {
    case Verdict::PseudoHermitian: return kExitPseudoHermitian;
    case Verdict::NotPseudoHermitian: return kExitNotPseudoHermitian;
    case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitInconclusive;
}

inline std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InputError(what + ": \"" + item + "\" is not a number");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw InputError(what + ": \"" + item + "\" is not a number");
        out.push_back(v);
    }
    if (out.empty()) throw InputError(what + ": empty list");
    return out;
}

inline std::pair<double, double> parse_range(const std::string& text, const std::string& what) {
    const auto v = parse_number_list(text, what);
    if (v.size() != 2) throw InputError(what + ": expected two comma-separated numbers");
    return {v[0], v[1]};
}

/// Two columns (x, v) separated by whitespace or a comma; '#' starts a comment.
inline SampledPotential read_sampled_potential(const std::string& path) {
    std::istringstream in(read_text_file(path));
    SampledPotential p;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ls(line);
        double x = 0.0, v = 0.0;
        if (!(ls >> x)) continue;
        std::string rest;
        if (!(ls >> v) || (ls >> rest)) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected two numbers";
            throw InputError(os.str());
        }
        p.grid.emplace_back(x, v);
    }
    return p;
}

/// "rectangular:v0,a,b" or "sampled:path".
inline PotentialSpec parse_potential(const std::string& text, double k) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    PotentialSpec spec{RectangularBarrier{0.0, 0.0, 1.0}, k};
    if (kind == "rectangular") {
        const auto v = parse_number_list(arg, "--potential rectangular");
        if (v.size() != 3) throw InputError("--potential rectangular: expected v0,a,b");
        spec.kind = RectangularBarrier{v[0], v[1], v[2]};
    } else if (kind == "sampled") {
        if (arg.empty()) throw InputError("--potential sampled: missing path");
        spec.kind = read_sampled_potential(arg);
    } else {
        throw InputError("--potential: expected rectangular:v0,a,b or sampled:path");
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    return spec;
}

namespace detail {
inline void write_output(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << text;
}
} // namespace detail

struct AnalyzeOptions {
    std::string input;
    std::optional<double> tol_cluster;
    std::optional<double> tol_pair;
    std::optional<double> tol_real;
    std::string json_out;
};

inline int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        const ComplexMatrix h = read_matrix_file(opt.input);
        if (h.rows() != h.cols()) throw InputError("matrix must be square");
        ToleranceProfile tol;
        if (opt.tol_cluster) tol.cluster = *opt.tol_cluster;
        if (opt.tol_pair) tol.pair = *opt.tol_pair;
        if (opt.tol_real) tol.real = *opt.tol_real;
        for (double t : {tol.cluster, tol.pair, tol.real})
            if (!(t >= 0.0)) throw InputError("tolerances must be non-negative");
        const Certificate cert = decide(h, tol);
        detail::write_output(opt.json_out, dump_json(certificate_to_json(cert)), out);
        if (!opt.json_out.empty()) out << to_string(cert.verdict) << "\n";
        return exit_code_for(cert.verdict);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

struct ScatterCommand {
    std::string potential;
    double k = 1.0;
    std::string x_range = "0,1";
    std::size_t samples = 11;
    std::size_t steps = 2000;
    std::string csv_out;
};

inline int cmd_scatter_sweep(const ScatterCommand& cmd, std::ostream& out, std::ostream& err) {
    try {
        ScatterSweepOptions opt{parse_potential(cmd.potential, cmd.k), 0.0, 1.0, cmd.samples, cmd.steps};
        std::tie(opt.x_min, opt.x_max) = parse_range(cmd.x_range, "--x-range");
        std::vector<std::vector<std::string>> rows;
        try {
            rows = scatter_sweep(opt, thread_count());
        } catch (const ExtrapolationError& e) {
            throw InputError(e.what());
        } catch (const InvalidArgument& e) {
            throw InputError(e.what());
        }
        std::string text = csv_line(scatter_sweep_header());
        for (const auto& r : rows) text += csv_line(r);
        detail::write_output(cmd.csv_out, text, out);
        return 0;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

struct ModelCommand {
    std::string lambdas;
    std::string varpi_range = "0.5,3";
    std::size_t samples = 6;
    std::string csv_out;
    bool compare_closed_form = false;
};

inline int cmd_model_sweep(const ModelCommand& cmd, std::ostream& out, std::ostream& err) {
    try {
        ModelSweepOptions opt;
        opt.lambdas = parse_number_list(cmd.lambdas, "--lambdas");
        std::tie(opt.varpi_min, opt.varpi_max) = parse_range(cmd.varpi_range, "--varpi-range");
        opt.samples = cmd.samples;
        opt.compare_closed_form = cmd.compare_closed_form;
        std::vector<std::vector<std::string>> rows;
        try {
            rows = model_sweep(opt, thread_count());
        } catch (const InvalidArgument& e) {
            throw InputError(e.what());
        }
        std::string text = csv_line(model_sweep_header(opt));
        for (const auto& r : rows) text += csv_line(r);
        detail::write_output(cmd.csv_out, text, out);
        return 0;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

} // namespace pseudospec
