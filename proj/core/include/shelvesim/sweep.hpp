// sweep.hpp - parallel evaluation of a scenario over its parameter grid

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shelvesim/scenario.hpp"

namespace shelvesim::sweep {

enum class ColumnType { real, integer, flag, text };

struct Column {
    std::string name;
    ColumnType type = ColumnType::real;
};

// monostate marks a cell that does not apply to the row or whose
// computation failed (the row status says which).
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct SweepRow {
    std::vector<Cell> cells;
    // Not part of the emitted table by default: it would break byte-identical output.
    double wall_seconds = 0.0;
};

// Range of the g_c and n_max values the convergence protocol settled on.
struct SolverRecord {
    std::optional<double> g_c_requested;
    std::optional<int> n_max_requested;
    // Unset: 2 * order + 4.
    std::optional<int> nmax_ceiling;
    double gc_tolerance = 1e-3;
    double nmax_tolerance = 1e-6;
    double gc_floor = 1e-4;
    std::string coupling;  // "filter" or "cavity"
    std::optional<double> g_c_used_min, g_c_used_max;
    std::optional<int> n_max_used_min, n_max_used_max;
    std::size_t unconverged_rows = 0;
};

struct SweepResult {
    Scenario scenario;
    std::vector<Column> columns;
    std::vector<SweepRow> rows;
    SolverRecord solver;
    double wall_seconds = 0.0;

    // Throws std::out_of_range for an unknown column.
    std::size_t column_index(std::string_view name) const;
    const Cell& at(std::size_t row, std::string_view column) const;
    // Real value of a cell, or nullopt when the cell is empty.
    std::optional<double> real(std::size_t row, std::string_view column) const;
    bool converged(std::size_t row) const;
};

// Column schema of a scenario, in emission order.
std::vector<Column> column_schema(const Scenario& s);

struct SweepOptions {
    int workers = 1;
    // Called from worker threads after each finished task.
    std::function<void(std::size_t done, std::size_t total)> progress;
};

// Rows are ordered case by case; inside a case the scalar grid comes first
// (first axis outermost), then the curve rows in delay order. The order and
// every value are independent of the number of workers.
SweepResult run_sweep(const Scenario& s, const SweepOptions& options);
SweepResult run_sweep(const Scenario& s, int workers);

// SHELVESIM_WORKERS when set to a positive integer, otherwise the hardware concurrency.
int default_workers();

}  // namespace shelvesim::sweep
