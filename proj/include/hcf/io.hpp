#ifndef HCF_IO_HPP
#define HCF_IO_HPP

//
// Algebra files, trace CSVs and run reports.
//
// Algebra files are JSON with sparse bracket entries over 1-based indices,
// i < j only (the antisymmetric partner is implied and redundant duplicates
// are rejected):
//
//   {
//     "name": "heisenberg3",            // optional
//     "dim": 3,
//     "brackets": [ {"i":1, "j":2, "k":3, "re":1.0, "im":0.0} ],
//     "metric": [ [re,im], ... ]         // optional, dense n x n row-major
//   }
//
// The metric is the Gram matrix of the Hermitian inner product in the file's
// basis, <u,v> = v^H H u; it must be Hermitian positive definite.
//
// CSV is the canonical numeric artifact. Exact header:
//   t,norm_sq,F,trK,residual,eig_1..eig_n
// with one row per sample; doubles are printed with %.17g so a parse
// round-trips bit-exactly.
//

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcf/algebra.hpp"
#include "hcf/bracket.hpp"
#include "hcf/flow.hpp"
#include "hcf/version.hpp"

namespace hcf {
namespace io {

using nlohmann::json;

struct AlgebraFile {
    std::string name;
    Bracket bracket{1};
    std::optional<MatC> metric;
    json echo;  // canonical re-emission of the parsed content
};

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline ValidationError parse_error(const std::string& where, const std::string& what) {
    return ValidationError("parse_error", "algebra file, " + where + ": " + what);
}

inline double number_field(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw parse_error(where, std::string("missing or non-numeric field '") + key + "'");
    return j[key].get<double>();
}

inline int int_field(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw parse_error(where, std::string("missing or non-integer field '") + key + "'");
    return j[key].get<int>();
}

}  // namespace detail

inline json bracket_to_json(const Bracket& mu, const std::string& name = {},
                            const std::optional<MatC>& metric = std::nullopt) {
    json j;
    if (!name.empty()) j["name"] = name;
    j["dim"] = mu.dim();
    json entries = json::array();
    for (int p = 0; p < mu.pairs(); ++p) {
        auto [i, jj] = mu.pair_at(p);
        for (int k = 0; k < mu.dim(); ++k) {
            cplx v = mu.pair_matrix()(k, p);
            if (v == cplx(0.0)) continue;
            entries.push_back({{"i", i + 1}, {"j", jj + 1}, {"k", k + 1},
                               {"re", v.real()}, {"im", v.imag()}});
        }
    }
    j["brackets"] = entries;
    if (metric) {
        json m = json::array();
        for (int r = 0; r < metric->rows(); ++r)
            for (int c = 0; c < metric->cols(); ++c)
                m.push_back({(*metric)(r, c).real(), (*metric)(r, c).imag()});
        j["metric"] = m;
    }
    return j;
}

inline AlgebraFile parse_algebra_json(const json& j) {
    AlgebraFile out;
    if (!j.is_object()) throw detail::parse_error("top level", "expected a JSON object");
    const int dim = detail::int_field(j, "top level", "dim");
    if (dim < 1) throw detail::parse_error("dim", "dimension must be >= 1");
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw detail::parse_error("name", "must be a string");
        out.name = j["name"].get<std::string>();
    }
    Bracket mu(dim);
    if (!j.contains("brackets") || !j["brackets"].is_array())
        throw detail::parse_error("brackets", "missing or non-array field");
    std::size_t idx = 0;
    for (const auto& e : j["brackets"]) {
        const std::string where = "brackets[" + std::to_string(idx++) + "]";
        const int i = detail::int_field(e, where, "i");
        const int jj = detail::int_field(e, where, "j");
        const int k = detail::int_field(e, where, "k");
        if (i < 1 || i > dim || jj < 1 || jj > dim || k < 1 || k > dim)
            throw detail::parse_error(where, "index out of range 1..dim");
        if (i >= jj) throw detail::parse_error(where, "entries require i < j");
        const double re = detail::number_field(e, where, "re");
        const double im = detail::number_field(e, where, "im");
        if (!std::isfinite(re) || !std::isfinite(im))
            throw detail::parse_error(where, "non-finite value");
        if (mu.entry(i - 1, jj - 1, k - 1) != cplx(0.0))
            throw detail::parse_error(where, "duplicate (i,j,k) entry");
        mu.set_entry(i - 1, jj - 1, k - 1, cplx(re, im));
    }
    if (j.contains("metric")) {
        const auto& m = j["metric"];
        if (!m.is_array() || m.size() != static_cast<std::size_t>(dim) * dim)
            throw ValidationError("bad_metric", "metric must be a dense n*n array of [re,im] pairs");
        MatC h(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                const auto& cell = m[static_cast<std::size_t>(r) * dim + c];
                if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
                    !cell[1].is_number())
                    throw ValidationError("bad_metric", "metric entries must be [re,im] pairs");
                h(r, c) = cplx(cell[0].get<double>(), cell[1].get<double>());
            }
        if (!is_hermitian(h, 1e-10))
            throw ValidationError("bad_metric", "metric is not Hermitian");
        Eigen::SelfAdjointEigenSolver<MatC> es(h, Eigen::EigenvaluesOnly);
        if (!(es.eigenvalues().minCoeff() > 1e-12 * std::max(0.0, es.eigenvalues().maxCoeff())))
            throw ValidationError("bad_metric", "metric is not positive definite");
        out.metric = h;
    }
    out.bracket = mu;
    out.echo = bracket_to_json(mu, out.name, out.metric);
    return out;
}

inline AlgebraFile load_algebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("parse_error", "cannot open algebra file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("parse_error", std::string("algebra file is not valid JSON: ") + e.what());
    }
    return parse_algebra_json(j);
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << content;
    if (!out) throw IoError("failed writing output file: " + path);
}

// --- trace CSV -------------------------------------------------------------

struct TraceRow {
    double t = 0.0;
    double norm_sq = 0.0;
    double f_value = 0.0;
    double tr_k = 0.0;
    double residual = 0.0;
    VecR spectrum;
};

inline std::string csv_header(int n) {
    std::string h = "t,norm_sq,F,trK,residual";
    for (int i = 1; i <= n; ++i) h += ",eig_" + std::to_string(i);
    h += "\n";
    return h;
}

inline std::string rows_to_csv(const std::vector<TraceRow>& rows, int n) {
    std::string out = csv_header(n);
    for (const auto& r : rows) {
        out += fmt(r.t);
        out += ',';
        out += fmt(r.norm_sq);
        out += ',';
        out += fmt(r.f_value);
        out += ',';
        out += fmt(r.tr_k);
        out += ',';
        out += fmt(r.residual);
        for (int i = 0; i < n; ++i) {
            out += ',';
            out += fmt(i < r.spectrum.size() ? r.spectrum(i) : 0.0);
        }
        out += '\n';
    }
    return out;
}

inline TraceRow row_from_diag(double t, const Diagnostics& d) {
    return TraceRow{t, d.norm_sq, d.f_value, d.tr_k, d.fixed_point_residual, d.spectrum};
}

inline std::vector<TraceRow> rows_of(const FlowTrace& trace) {
    std::vector<TraceRow> rows;
    rows.reserve(trace.samples.size());
    for (const auto& s : trace.samples) rows.push_back(row_from_diag(s.t, s.diag));
    return rows;
}

// Companion samples rendered as the unnormalized trajectory mu(t) =
// sqrt(y) nu: norms and spectra rescale by y, the scale-invariant columns
// carry over.
inline std::vector<TraceRow> rows_of(const CompanionTrace& trace) {
    std::vector<TraceRow> rows;
    rows.reserve(trace.samples.size());
    for (const auto& s : trace.samples) {
        TraceRow r;
        r.t = s.t;
        r.norm_sq = s.y;
        r.f_value = s.diag.f_value;
        r.tr_k = s.y * s.diag.tr_k;
        r.residual = s.diag.fixed_point_residual;
        r.spectrum = s.y * s.diag.spectrum;
        rows.push_back(std::move(r));
    }
    return rows;
}

// Metric samples rendered through the h-unitary-frame bracket.
inline std::vector<TraceRow> rows_of(const MetricTrace& trace) {
    std::vector<TraceRow> rows;
    rows.reserve(trace.samples.size());
    for (const auto& s : trace.samples) rows.push_back(row_from_diag(s.t, s.diag));
    return rows;
}

// Keep at most max_rows rows, evenly spaced, endpoints included. 0 = all.
inline std::vector<TraceRow> subsample(std::vector<TraceRow> rows, std::size_t max_rows) {
    if (max_rows == 0 || rows.size() <= max_rows) return rows;
    std::vector<TraceRow> out;
    out.reserve(max_rows);
    for (std::size_t i = 0; i < max_rows; ++i) {
        std::size_t idx = (i * (rows.size() - 1)) / (max_rows - 1);
        out.push_back(rows[idx]);
    }
    return out;
}

inline json rows_to_json(const std::vector<TraceRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json jr;
        jr["t"] = r.t;
        jr["norm_sq"] = r.norm_sq;
        jr["F"] = r.f_value;
        jr["trK"] = r.tr_k;
        jr["residual"] = r.residual;
        json eig = json::array();
        for (int i = 0; i < r.spectrum.size(); ++i) eig.push_back(r.spectrum(i));
        jr["eig"] = eig;
        arr.push_back(std::move(jr));
    }
    return arr;
}

// --- misc serialization ------------------------------------------------------

inline json matrix_to_json(const MatC& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json vec_to_json(const VecR& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

inline json diagnostics_to_json(const Diagnostics& d) {
    json j;
    j["norm_sq"] = d.norm_sq;
    j["F"] = d.f_value;
    j["trK"] = d.tr_k;
    j["residual"] = d.fixed_point_residual;
    j["eig"] = vec_to_json(d.spectrum);
    j["zero_bracket"] = d.zero_bracket;
    return j;
}

// Report skeleton shared by all commands; the payload is command-specific.
inline json make_report(const std::string& command, const json& input_echo, std::uint64_t seed) {
    json rep;
    rep["command"] = command;
    rep["convention"] = convention_version;
    rep["library_version"] = library_version;
    rep["seed"] = seed;
    rep["input"] = input_echo;
    return rep;
}

}  // namespace io
}  // namespace hcf

#endif
