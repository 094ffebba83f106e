#ifndef HECKE_REPORT_HPP
#define HECKE_REPORT_HPP

#include "hecke/analysis.hpp"
#include "hecke/table_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace hecke {

inline constexpr const char* tool_version = "1.0.0";

using Json = nlohmann::ordered_json;

/// 12 significant digits, C locale.
inline std::string format_real(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// JSON number carrying exactly the 12-digit value; null for non-finite input.
inline Json json_real(double x)
{
    if (!std::isfinite(x)) return nullptr;
    return std::strtod(format_real(x).c_str(), nullptr);
}

inline Json json_int(const Int& x) { return x.get_str(); }

inline Json json_opt_real(const std::optional<double>& x) { return x ? json_real(*x) : Json(nullptr); }

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const
    {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return out;
    }
};

/// One emitted report: JSON envelope plus its CSV rendering.
struct ReportDoc {
    std::string name;
    std::string kind;
    Json rows = Json::array();
    Json summary = Json::object();
    CsvTable csv;
    /// Extra CSV files (name, table), e.g. full failing lists beyond the cap.
    std::vector<std::pair<std::string, CsvTable>> side_files;

    std::string json_text(const Json& config) const
    {
        Json env;
        env["tool_version"] = tool_version;
        env["config"] = config;
        env["kind"] = kind;
        env["rows"] = rows;
        env["summary"] = summary;
        return env.dump(2) + "\n";
    }
};

enum class OutputFormat { csv, json, both };

inline OutputFormat parse_output_format(const std::string& s)
{
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    if (s == "both") return OutputFormat::both;
    throw DomainError("unknown output format '" + s + "'");
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw IoError("write failed for " + path.string());
}

/// Writes the report files and returns their paths in write order.
inline std::vector<std::filesystem::path> write_report(const ReportDoc& doc, const Json& config,
                                                       const std::filesystem::path& dir, OutputFormat fmt)
{
    std::vector<std::filesystem::path> written;
    if (fmt != OutputFormat::json) {
        written.push_back(dir / (doc.name + ".csv"));
        write_text_file(written.back(), doc.csv.str());
    }
    if (fmt != OutputFormat::csv) {
        written.push_back(dir / (doc.name + ".json"));
        write_text_file(written.back(), doc.json_text(config));
    }
    for (const auto& [name, table] : doc.side_files) {
        written.push_back(dir / (name + ".csv"));
        write_text_file(written.back(), table.str());
    }
    return written;
}

// ---------------------------------------------------------------------------
// Converters
// ---------------------------------------------------------------------------

inline constexpr std::size_t serialized_failing_cap = 10000;

inline Json threshold_json(const ThresholdSpec& s)
{
    Json j;
    j["kind"] = to_string(s.kind);
    j["epsilon"] = json_real(s.epsilon);
    j["g"] = to_string(s.g);
    j["g_constant"] = json_real(s.g_constant);
    j["c"] = json_real(s.c);
    return j;
}

inline ReportDoc density_doc(const DensityReport& r, const std::string& kind)
{
    ReportDoc doc;
    doc.name = kind;
    doc.kind = kind;
    doc.csv.header = {"n", "coefficient", "lpf", "lpf_exact", "threshold"};
    auto cells = [](const FailingEntry& f) {
        return std::vector<std::string>{std::to_string(f.n), f.coefficient.get_str(),
                                        f.lpf ? f.lpf->lower.get_str() : "", f.lpf ? (f.lpf->exact ? "1" : "0") : "",
                                        format_real(f.threshold)};
    };
    for (std::size_t i = 0; i < r.failing_list.size() && i < serialized_failing_cap; ++i) {
        const auto& f = r.failing_list[i];
        Json row;
        row["n"] = f.n;
        row["coefficient"] = json_int(f.coefficient);
        row["lpf"] = f.lpf ? json_int(f.lpf->lower) : Json(nullptr);
        row["lpf_exact"] = f.lpf ? Json(f.lpf->exact) : Json(nullptr);
        row["threshold"] = json_real(f.threshold);
        doc.rows.push_back(row);
        doc.csv.rows.push_back(cells(f));
    }
    if (r.failing_list.size() > serialized_failing_cap) {
        CsvTable full;
        full.header = doc.csv.header;
        for (const auto& f : r.failing_list) full.rows.push_back(cells(f));
        doc.side_files.emplace_back(kind + "-failing-full", std::move(full));
    }
    auto& s = doc.summary;
    s["form"] = r.form.name;
    s["weight"] = r.form.weight;
    s["x_max"] = r.x_max;
    s["threshold"] = threshold_json(r.threshold);
    s["domain"] = r.over_primes ? "primes" : "integers";
    s["scan_floor"] = r.scan_floor;
    s["total"] = r.total;
    s["excluded"] = r.excluded;
    s["scanned"] = r.scanned;
    s["zeros"] = r.zeros;
    s["passing"] = r.passing;
    s["failing"] = r.failing;
    s["failing_serialized"] = std::min(r.failing_list.size(), serialized_failing_cap);
    s["failing_list_complete"] = r.failing_list_complete;
    s["density_numerator"] = r.density_num;
    s["density_denominator"] = r.scanned;
    s["density"] = json_real(r.density);
    s["asymptotic_floor"] = json_real(r.asymptotic_floor);
    s["closed"] = r.closed();
    return doc;
}

inline ReportDoc sato_tate_doc(const SatoTateReport& r)
{
    ReportDoc doc;
    doc.name = doc.kind = "sato-tate";
    doc.csv.header = {"bin_lo", "bin_hi", "empirical", "expected"};
    double mass = 0;
    for (const auto& b : r.bins) {
        Json row;
        row["bin_lo"] = json_real(b.lo);
        row["bin_hi"] = json_real(b.hi);
        row["count"] = b.count;
        row["empirical"] = json_real(b.empirical);
        row["expected"] = json_real(b.expected);
        doc.rows.push_back(row);
        doc.csv.rows.push_back({format_real(b.lo), format_real(b.hi), format_real(b.empirical), format_real(b.expected)});
        mass += b.expected;
    }
    auto& s = doc.summary;
    s["form"] = r.form.name;
    s["x_max"] = r.x_max;
    s["samples"] = r.samples;
    s["bins"] = r.bins.size();
    s["ks"] = json_real(r.ks);
    s["min_lambda"] = json_real(r.min_lambda);
    s["max_lambda"] = json_real(r.max_lambda);
    s["expected_mass_total"] = json_real(mass);
    return doc;
}

inline ReportDoc congruence_doc(const std::vector<CongruenceReport>& rs)
{
    ReportDoc doc;
    doc.name = doc.kind = "congruence";
    doc.csv.header = {"d", "pi_x", "excluded", "pi_f", "pi_f_star", "ratio", "reference"};
    for (const auto& r : rs) {
        Json row;
        row["d"] = r.d;
        row["pi_x"] = r.pi_x;
        row["excluded"] = r.excluded;
        row["pi_f"] = r.pi_f;
        row["pi_f_star"] = r.pi_f_star;
        row["ratio"] = json_real(r.ratio);
        row["reference"] = json_opt_real(r.reference);
        doc.rows.push_back(row);
        doc.csv.rows.push_back({std::to_string(r.d), std::to_string(r.pi_x), std::to_string(r.excluded),
                                std::to_string(r.pi_f), std::to_string(r.pi_f_star), format_real(r.ratio),
                                r.reference ? format_real(*r.reference) : ""});
    }
    if (!rs.empty()) {
        doc.summary["form"] = rs.front().form.name;
        doc.summary["x_max"] = rs.front().x_max;
    }
    doc.summary["moduli"] = rs.size();
    return doc;
}

inline ReportDoc odd_power_doc(const OddPowerReport& r)
{
    ReportDoc doc;
    doc.name = doc.kind = "prime-power";
    doc.csv.header = {"p", "a_p", "lpf", "lpf_exact", "divisible", "checked", "implied_threshold", "implied_pass"};
    u64 implied = 0;
    for (const auto& row : r.rows) {
        Json j;
        j["p"] = row.p;
        j["a_p"] = json_int(row.a);
        j["lpf"] = json_int(row.lpf.lower);
        j["lpf_exact"] = row.lpf.exact;
        j["divisible"] = row.divisible;
        j["checked"] = row.checked;
        j["implied_threshold"] = json_real(row.implied_threshold);
        j["implied_pass"] = row.implied_pass;
        doc.rows.push_back(j);
        doc.csv.rows.push_back({std::to_string(row.p), row.a.get_str(), row.lpf.lower.get_str(),
                                row.lpf.exact ? "1" : "0", std::to_string(row.divisible), std::to_string(row.checked),
                                format_real(row.implied_threshold), row.implied_pass ? "1" : "0"});
        implied += row.implied_pass;
    }
    auto& s = doc.summary;
    s["form"] = r.form.name;
    s["x_max"] = r.x_max;
    s["m_max"] = r.m_max;
    s["primes"] = r.rows.size();
    s["skipped_zero"] = r.skipped_zero;
    s["violations"] = r.violations();
    s["implied_pass"] = implied;
    return doc;
}

inline ReportDoc theorem6_doc(const std::vector<Theorem6Row>& rows, const FormDescriptor& form)
{
    ReportDoc doc;
    doc.name = doc.kind = "theorem6";
    doc.csv.header = {"p", "n", "n3", "lpf", "lpf_exact", "loglog_p", "denominator", "explicit_bound"};
    for (const auto& r : rows) {
        Json j;
        j["p"] = r.p;
        j["n"] = r.n;
        j["n3"] = r.n3;
        j["lpf"] = json_int(r.lpf.lower);
        j["lpf_exact"] = r.lpf.exact;
        j["loglog_p"] = json_real(r.loglog_p);
        j["denominator"] = r.denominator;
        j["explicit_bound"] = json_real(r.explicit_bound);
        doc.rows.push_back(j);
        doc.csv.rows.push_back({std::to_string(r.p), std::to_string(r.n), std::to_string(r.n3), r.lpf.lower.get_str(),
                                r.lpf.exact ? "1" : "0", format_real(r.loglog_p), std::to_string(r.denominator),
                                format_real(r.explicit_bound)});
    }
    doc.summary["form"] = form.name;
    doc.summary["rows"] = rows.size();
    doc.summary["bound"] = "c(n3, f) * loglog p, c uncomputed";
    doc.summary["explicit_bound"] = "loglog p / (16 (k-1) d_f phi(n3))";
    return doc;
}

inline ReportDoc wieferich_doc(const std::vector<WieferichRow>& rows, const std::string& name)
{
    ReportDoc doc;
    doc.name = name;
    doc.kind = "wieferich";
    doc.csv.header = {"p", "q", "type", "root", "norm", "alpha_path", "beta_path", "precision"};
    unsigned long r_hat = 0;
    u64 disagree = 0, below_one = 0;
    for (const auto& w : rows) {
        Json j;
        j["p"] = w.p;
        j["q"] = w.q;
        j["type"] = to_string(w.type);
        j["root"] = w.root;
        j["norm"] = json_int(w.norm);
        j["alpha_path"] = w.valuation.alpha_path;
        j["beta_path"] = w.valuation.beta_path;
        j["precision"] = w.valuation.precision;
        doc.rows.push_back(j);
        doc.csv.rows.push_back({std::to_string(w.p), std::to_string(w.q), to_string(w.type), std::to_string(w.root),
                                w.norm.get_str(), std::to_string(w.valuation.alpha_path),
                                std::to_string(w.valuation.beta_path), std::to_string(w.valuation.precision)});
        r_hat = std::max(r_hat, w.valuation.alpha_path);
        disagree += !w.valuation.agree();
        below_one += w.valuation.alpha_path < 1;
    }
    doc.summary["ideals"] = rows.size();
    doc.summary["r_hat"] = r_hat;
    doc.summary["path_disagreements"] = disagree;
    doc.summary["below_one"] = below_one;
    return doc;
}

inline ReportDoc pafp_bound_doc(const PafpReport& r)
{
    ReportDoc doc;
    doc.name = "pafp-bound";
    doc.kind = "pafp";
    doc.csv.header = {"n", "phi", "omega", "lpf", "lpf_exact", "bound", "general_bound", "verdict"};
    Json counts = Json::object();
    for (auto v : {PafpVerdict::pass, PafpVerdict::fail, PafpVerdict::undetermined, PafpVerdict::below_floor}) {
        counts[to_string(v)] = 0;
    }
    for (const auto& row : r.rows) {
        Json j;
        j["n"] = row.n;
        j["phi"] = row.phi;
        j["omega"] = row.omega;
        j["lpf"] = json_int(row.lpf.lower);
        j["lpf_exact"] = row.lpf.exact;
        j["bound"] = json_real(row.bound);
        j["general_bound"] = json_opt_real(row.general_bound);
        j["verdict"] = to_string(row.verdict);
        doc.rows.push_back(j);
        doc.csv.rows.push_back({std::to_string(row.n), std::to_string(row.phi), std::to_string(row.omega),
                                row.lpf.lower.get_str(), row.lpf.exact ? "1" : "0", format_real(row.bound),
                                row.general_bound ? format_real(*row.general_bound) : "", to_string(row.verdict)});
        counts[to_string(row.verdict)] = counts[to_string(row.verdict)].get<u64>() + 1;
    }
    auto& s = doc.summary;
    s["form"] = r.form.name;
    s["p"] = r.p;
    s["n_max"] = r.n_max;
    s["n_floor"] = r.n_floor;
    s["norm_limit"] = r.norm_limit;
    s["r_hat"] = r.r_hat;
    s["class_number"] = r.class_number ? Json(*r.class_number) : Json(nullptr);
    s["height"] = json_real(r.height);
    s["verdicts"] = counts;
    return doc;
}

} // namespace hecke

#endif // HECKE_REPORT_HPP
