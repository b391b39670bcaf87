#pragma once

// JSON matrix and certificate formats, CSV helpers.
//
// Complex numbers are [re, im] pairs. Non-finite reals (an infinite condition
// estimate) serialize as null and parse back as +inf.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pseudospec/certify.hpp"

namespace pseudospec {

using Json = nlohmann::ordered_json;

/// Malformed or unreadable input; maps to CLI exit code 3.
class InputError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline Json real_to_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline double real_from_json(const Json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    if (!j.is_number()) throw InputError("expected a number");
    return j.get<double>();
}

inline Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError("complex entries must be [re, im] number pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace detail

inline Json matrix_to_json(const ComplexMatrix& m) {
    Json entries = Json::array();
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) entries.push_back(detail::complex_to_json(m(r, c)));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("matrix: expected an object with rows, cols, entries");
    for (const char* key : {"rows", "cols", "entries"})
        if (!j.contains(key)) throw InputError(std::string("matrix: missing field \"") + key + "\"");
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        throw InputError("matrix: rows and cols must be integers");
    const auto rows = j["rows"].get<long long>();
    const auto cols = j["cols"].get<long long>();
    if (rows <= 0 || cols <= 0) throw InputError("matrix: rows and cols must be positive");
    const Json& entries = j["entries"];
    if (!entries.is_array() || static_cast<long long>(entries.size()) != rows * cols) {
        std::ostringstream os;
        os << "matrix: expected " << rows * cols << " entries";
        throw InputError(os.str());
    }
    ComplexMatrix m(rows, cols);
    for (long long r = 0; r < rows; ++r)
        for (long long c = 0; c < cols; ++c) {
            const cplx z = detail::complex_from_json(entries[static_cast<std::size_t>(r * cols + c)]);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InputError("matrix: non-finite entry");
            m(r, c) = z;
        }
    return m;
}

/// Parse JSON text; syntax errors are reported with line and column.
inline Json parse_json_text(const std::string& text, const std::string& source = "input") {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, column] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream os;
        os << source << ":" << line << ":" << column << ": malformed JSON (" << e.what() << ")";
        throw InputError(os.str());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ComplexMatrix read_matrix_file(const std::string& path) {
    return matrix_from_json(parse_json_text(read_text_file(path), path));
}

// ---------------------------------------------------------------------------
// Certificates

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "pseudo_hermitian") return Verdict::PseudoHermitian;
    if (s == "not_pseudo_hermitian") return Verdict::NotPseudoHermitian;
    if (s == "inconclusive") return Verdict::Inconclusive;
    throw InputError("unknown verdict \"" + s + "\"");
}

inline Json table_to_json(const SpectralTable& t) {
    Json out = Json::array();
    for (const auto& c : t.clusters) {
        out.push_back(Json{{"E", detail::complex_to_json(c.center)}, {"d", c.geometric}, {"p_list", c.p_list}});
    }
    return out;
}

inline SpectralTable table_from_json(const Json& j, double cluster_tol) {
    SpectralTable t;
    t.cluster_tol = cluster_tol;
    for (const auto& c : j) {
        EigenCluster cl;
        cl.center = detail::complex_from_json(c.at("E"));
        cl.geometric = c.at("d").get<std::size_t>();
        cl.p_list = c.at("p_list").get<std::vector<std::size_t>>();
        for (auto p : cl.p_list) cl.algebraic += p;
        t.clusters.push_back(std::move(cl));
    }
    return t;
}

inline Json certificate_to_json(const Certificate& cert) {
    Json out;
    out["verdict"] = to_string(cert.verdict);
    out["spectral_table"] = cert.table ? table_to_json(*cert.table) : Json::array();

    Json pairing{{"ok", cert.pairing_ok}};
    if (cert.labeling) {
        pairing["real_clusters"] = cert.labeling->real_clusters;
        Json pairs = Json::array();
        for (const auto& [p, m] : cert.labeling->pair_list) pairs.push_back(Json::array({p, m}));
        pairing["pairs"] = std::move(pairs);
        pairing["unpaired"] = cert.labeling->unpaired;
    }
    if (cert.pairing && !cert.pairing->ok) {
        if (cert.pairing->unpaired_cluster) pairing["unpaired_cluster"] = *cert.pairing->unpaired_cluster;
        if (cert.pairing->mismatched_pair)
            pairing["mismatched_pair"] =
                Json::array({cert.pairing->mismatched_pair->first, cert.pairing->mismatched_pair->second});
    }
    out["pairing"] = std::move(pairing);

    Json residuals = Json::object();
    for (const auto& [k, v] : cert.residuals) residuals[k] = detail::real_to_json(v);
    out["residuals"] = std::move(residuals);
    Json tolerances = Json::object();
    for (const auto& [k, v] : cert.tolerances) tolerances[k] = detail::real_to_json(v);
    out["tolerances"] = std::move(tolerances);
    out["condition"] = cert.condition ? detail::real_to_json(*cert.condition) : Json(nullptr);
    out["diagnostics"] = cert.diagnostics;
    if (cert.failed_power) out["failed_power"] = *cert.failed_power;

    if (cert.witnesses) {
        const auto& w = *cert.witnesses;
        out["witnesses"] = Json{{"S", matrix_to_json(w.S)},
                                {"Theta", matrix_to_json(w.Theta.matrix())},
                                {"tau0", matrix_to_json(w.tau0.matrix())},
                                {"tau", matrix_to_json(w.tau.matrix())},
                                {"C0", matrix_to_json(w.C0)},
                                {"eta0", matrix_to_json(w.eta0)},
                                {"X0", matrix_to_json(w.X0.matrix())},
                                {"X", matrix_to_json(w.X.matrix())},
                                {"eta", matrix_to_json(w.eta)}};
    }
    return out;
}

inline Certificate certificate_from_json(const Json& j) {
    try {
        Certificate cert;
        cert.verdict = verdict_from_string(j.at("verdict").get<std::string>());
        for (const auto& [k, v] : j.at("tolerances").items()) cert.tolerances[k] = detail::real_from_json(v);
        for (const auto& [k, v] : j.at("residuals").items()) cert.residuals[k] = detail::real_from_json(v);
        const double ctol = cert.tolerances.count("cluster") ? cert.tolerances["cluster"] : 0.0;
        if (!j.at("spectral_table").empty()) cert.table = table_from_json(j.at("spectral_table"), ctol);

        const Json& pairing = j.at("pairing");
        cert.pairing_ok = pairing.at("ok").get<bool>();
        if (pairing.contains("real_clusters")) {
            SpectralLabeling lab;
            lab.real_clusters = pairing.at("real_clusters").get<std::vector<std::size_t>>();
            for (const auto& p : pairing.at("pairs"))
                lab.pair_list.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
            lab.unpaired = pairing.at("unpaired").get<std::vector<std::size_t>>();
            cert.labeling = std::move(lab);
        }
        PairingReport report;
        report.ok = cert.pairing_ok;
        if (pairing.contains("unpaired_cluster")) report.unpaired_cluster = pairing.at("unpaired_cluster").get<std::size_t>();
        if (pairing.contains("mismatched_pair"))
            report.mismatched_pair = std::make_pair(pairing.at("mismatched_pair").at(0).get<std::size_t>(),
                                                    pairing.at("mismatched_pair").at(1).get<std::size_t>());
        if (cert.table) {
            report.diagnostics = cert.pairing_ok ? "" : j.at("diagnostics").get<std::string>();
            cert.pairing = report;
        }

        if (!j.at("condition").is_null()) cert.condition = j.at("condition").get<double>();
        else if (cert.table) cert.condition = std::numeric_limits<double>::infinity();
        cert.diagnostics = j.at("diagnostics").get<std::string>();
        if (j.contains("failed_power")) cert.failed_power = j.at("failed_power").get<std::size_t>();

        if (j.contains("witnesses")) {
            const Json& w = j.at("witnesses");
            cert.witnesses = SymmetryOperators{matrix_from_json(w.at("S")),
                                               AntilinearOp(matrix_from_json(w.at("Theta"))),
                                               AntilinearOp(matrix_from_json(w.at("tau0"))),
                                               AntilinearOp(matrix_from_json(w.at("tau"))),
                                               matrix_from_json(w.at("C0")),
                                               matrix_from_json(w.at("eta0")),
                                               AntilinearOp(matrix_from_json(w.at("X0"))),
                                               AntilinearOp(matrix_from_json(w.at("X"))),
                                               matrix_from_json(w.at("eta"))};
        }
        return cert;
    } catch (const Json::exception& e) {
        throw InputError(std::string("certificate: ") + e.what());
    }
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// CSV

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") != std::string::npos) {
            out += '"';
            for (char c : f) {
                if (c == '"') out += '"';
                out += c;
            }
            out += '"';
        } else {
            out += f;
        }
    }
    return out + "\n";
}

} // namespace pseudospec
