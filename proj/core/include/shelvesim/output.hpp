// output.hpp - CSV and JSON serialisation of sweep results

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "shelvesim/sweep.hpp"

namespace shelvesim::sweep {

enum class OutputFormat { csv, json };

std::optional<OutputFormat> parse_format(std::string_view s);

struct EmitOptions {
    // Appends a wall_seconds column / field. Off by default because timings
    // differ between runs.
    bool timings = false;
};

// 17 significant digits, "nan" / "inf" / "-inf" for non-finite values.
std::string format_real(double v);

// Header row = column schema, comma separated, LF line endings. Empty cells
// stand for values that do not apply or failed; commas and line breaks inside
// text cells are replaced by ';' and ' '.
void write_csv(const SweepResult& r, std::ostream& out, const EmitOptions& options = {});
std::string to_csv(const SweepResult& r, const EmitOptions& options = {});

// {"meta": {...}, "rows": [{column: value, ...}, ...]}; empty cells become null.
void write_json(const SweepResult& r, std::ostream& out, const EmitOptions& options = {});
std::string to_json(const SweepResult& r, const EmitOptions& options = {});

// Writes to `path`; I/O failures are raised as std::runtime_error naming the path.
void emit_results(const SweepResult& r, OutputFormat format, const std::filesystem::path& path,
                  const EmitOptions& options = {});

}  // namespace shelvesim::sweep
