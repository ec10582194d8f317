// output.cpp - deterministic CSV and JSON writers

#include "shelvesim/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace shelvesim::sweep {

using nlohmann::ordered_json;

namespace {

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',') c = ';';
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, double>) {
                return format_real(v);
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return sanitize(v);
            }
        },
        c);
}

ordered_json json_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
                if (std::isfinite(v)) return v;
                return nullptr;
            } else {
                return v;
            }
        },
        c);
}

template <typename T>
ordered_json opt(const std::optional<T>& v) {
    if (v) return *v;
    return nullptr;
}

}  // namespace

std::optional<OutputFormat> parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    return std::nullopt;
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

void write_csv(const SweepResult& r, std::ostream& out, const EmitOptions& options) {
    std::string line;
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        if (i > 0) line += ',';
        line += r.columns[i].name;
    }
    if (options.timings) line += ",wall_seconds";
    line += '\n';
    out << line;
    for (const auto& row : r.rows) {
        line.clear();
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
            if (i > 0) line += ',';
            line += csv_cell(row.cells[i]);
        }
        if (options.timings) line += ',' + format_real(row.wall_seconds);
        line += '\n';
        out << line;
    }
}

std::string to_csv(const SweepResult& r, const EmitOptions& options) {
    std::ostringstream os;
    write_csv(r, os, options);
    return os.str();
}

void write_json(const SweepResult& r, std::ostream& out, const EmitOptions& options) {
    ordered_json meta;
    meta["scenario"] = ordered_json::parse(scenario_to_json(r.scenario));
    meta["toolkit_version"] = std::string(toolkit_version());
    meta["schema_version"] = kSchemaVersion;

    const SolverRecord& s = r.solver;
    ordered_json solver;
    solver["coupling"] = s.coupling;
    solver["g_c_requested"] = opt(s.g_c_requested);
    solver["n_max_requested"] = opt(s.n_max_requested);
    solver["nmax_ceiling"] = opt(s.nmax_ceiling);
    solver["gc_tolerance"] = s.gc_tolerance;
    solver["nmax_tolerance"] = s.nmax_tolerance;
    solver["gc_floor"] = s.gc_floor;
    solver["g_c_used"] = {{"min", opt(s.g_c_used_min)}, {"max", opt(s.g_c_used_max)}};
    solver["n_max_used"] = {{"min", opt(s.n_max_used_min)}, {"max", opt(s.n_max_used_max)}};
    meta["solver"] = solver;

    ordered_json cols = ordered_json::array();
    for (const auto& c : r.columns) cols.push_back(c.name);
    meta["columns"] = cols;
    meta["row_count"] = r.rows.size();
    meta["unconverged_rows"] = s.unconverged_rows;
    if (options.timings) meta["wall_seconds"] = r.wall_seconds;

    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json obj;
        for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i].name] = json_cell(row.cells[i]);
        if (options.timings) obj["wall_seconds"] = row.wall_seconds;
        rows.push_back(std::move(obj));
    }

    ordered_json doc;
    doc["meta"] = std::move(meta);
    doc["rows"] = std::move(rows);
    out << doc.dump(1) << '\n';
}

std::string to_json(const SweepResult& r, const EmitOptions& options) {
    std::ostringstream os;
    write_json(r, os, options);
    return os.str();
}

void emit_results(const SweepResult& r, OutputFormat format, const std::filesystem::path& path,
                  const EmitOptions& options) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    if (format == OutputFormat::csv) {
        write_csv(r, out, options);
    } else {
        write_json(r, out, options);
    }
    out.flush();
    if (!out) throw std::runtime_error("failed while writing '" + path.string() + "'");
}

}  // namespace shelvesim::sweep
