// sweep.cpp - grid evaluation with a small worker pool

#include "shelvesim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>

namespace shelvesim::sweep {

using correlations::Coupling;
using correlations::FilteredCorrelation;

namespace {

constexpr const char* kCaseColumn = "case";
constexpr const char* kTauColumn = "tau";

bool uses_filtered(const Quantity& q) { return q.kind == QuantityKind::gn || q.kind == QuantityKind::quality; }

// A unit of work: one scalar grid point, or the curves of one case.
struct Task {
    std::size_t case_index = 0;
    bool curve = false;
    std::size_t grid_index = 0;
};

class RowBuilder {
public:
    explicit RowBuilder(const std::vector<Column>& columns) : columns_(columns) {
        cells_.resize(columns.size());
    }

    void set(std::string_view name, Cell value) {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (columns_[i].name == name) {
                cells_[i] = std::move(value);
                return;
            }
        }
        throw std::logic_error("sweep: no column named " + std::string(name));
    }

    void note(const std::string& s) {
        if (!status_.empty()) status_ += "; ";
        status_ += s;
    }
    void fail(const std::string& s) {
        converged_ = false;
        note(s);
    }

    SweepRow finish(double seconds) {
        set("converged", converged_);
        set("status", status_.empty() ? std::string("ok") : status_);
        return {std::move(cells_), seconds};
    }

private:
    const std::vector<Column>& columns_;
    std::vector<Cell> cells_;
    bool converged_ = true;
    std::string status_;
};

std::string short_real(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 3);
    return std::string(buf, r.ptr);
}

class Evaluator {
public:
    Evaluator(const Scenario& s, const std::vector<Column>& columns) : s_(s), columns_(columns) {
        for (const auto& a : s.axes) axis_values_.push_back(a.grid.values());
        grid_size_ = 1;
        for (const auto& v : axis_values_) grid_size_ *= v.size();
        options_.coupling = s.model == ModelFamily::cavity ? Coupling::cavity : Coupling::filter;
        options_.nmax_ceiling = s.solver.nmax_ceiling;
    }

    std::size_t grid_size() const { return grid_size_; }
    std::size_t case_count() const { return std::max<std::size_t>(1, s_.cases.size()); }
    const correlations::ProtocolOptions& options() const { return options_; }

    std::vector<SweepRow> run(const Task& t) const {
        return t.curve ? curves(t.case_index) : std::vector<SweepRow>{scalar(t.case_index, t.grid_index)};
    }

private:
    std::map<std::string, double> base_values(std::size_t case_index) const {
        std::map<std::string, double> v = s_.fixed;
        if (!s_.cases.empty()) {
            for (const auto& [k, x] : s_.cases[case_index].params) v[k] = x;
        }
        return v;
    }

    void set_case(RowBuilder& row, std::size_t case_index) const {
        if (!s_.cases.empty()) row.set(kCaseColumn, s_.cases[case_index].label);
    }

    SweepRow scalar(std::size_t case_index, std::size_t grid_index) const {
        const auto start = std::chrono::steady_clock::now();
        RowBuilder row(columns_);
        set_case(row, case_index);

        auto values = base_values(case_index);
        std::size_t rest = grid_index;
        for (std::size_t a = s_.axes.size(); a-- > 0;) {
            const auto& grid = axis_values_[a];
            const double x = grid[rest % grid.size()];
            rest /= grid.size();
            values[s_.axes[a].parameter] = x;
            row.set(s_.axes[a].parameter, x);
        }

        std::optional<PointParameters> params;
        try {
            params = resolve_parameters(s_, values);
        } catch (const std::exception& e) {
            row.fail(std::string("parameters: ") + e.what());
        }

        if (params) {
            std::map<int, FilteredCorrelation> filtered;
            std::map<int, std::string> filtered_error;
            auto filtered_gn = [&](int order) -> const FilteredCorrelation* {
                if (auto it = filtered.find(order); it != filtered.end()) return &it->second;
                if (filtered_error.contains(order)) return nullptr;
                try {
                    return &filtered
                                .emplace(order, correlations::filtered_gn(params->emitter, params->sensor, order,
                                                                          options_))
                                .first->second;
                } catch (const std::exception& e) {
                    filtered_error[order] = e.what();
                    return nullptr;
                }
            };

            std::optional<double> rho_ee;
            std::string rho_error;
            auto excitation = [&]() -> std::optional<double> {
                if (!rho_ee && rho_error.empty()) {
                    try {
                        rho_ee = correlations::steady_excitation(params->emitter);
                    } catch (const std::exception& e) {
                        rho_error = e.what();
                    }
                }
                return rho_ee;
            };

            for (const auto& q : s_.quantities) {
                if (q.is_curve()) continue;
                const std::string col = q.column();
                if (uses_filtered(q)) {
                    const int order = q.kind == QuantityKind::gn ? q.order : 2;
                    const FilteredCorrelation* f = filtered_gn(order);
                    if (!f) {
                        row.fail(col + ": " + filtered_error[order]);
                        row.set(col + "_converged", false);
                        continue;
                    }
                    row.set(col + "_gc", f->g_c_used);
                    row.set(col + "_nmax", static_cast<long long>(f->n_max_used));
                    row.set(col + "_converged", f->converged);
                    if (!f->converged) {
                        row.fail(col + ": not converged (g_c change " + short_real(f->gc_change) +
                                 ", n_max change " + short_real(f->nmax_change) + ")");
                    }
                    if (q.kind == QuantityKind::gn) {
                        row.set(col, f->value);
                    } else if (auto r = excitation()) {
                        row.set(col, f->value * *r);
                    } else {
                        row.fail(col + ": " + rho_error);
                    }
                } else if (q.kind == QuantityKind::rho_ee) {
                    if (auto r = excitation()) {
                        row.set(col, *r);
                    } else {
                        row.fail(col + ": " + rho_error);
                    }
                }
            }
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return row.finish(secs);
    }

    std::vector<SweepRow> curves(std::size_t case_index) const {
        const auto start = std::chrono::steady_clock::now();
        const auto values = base_values(case_index);
        std::vector<SweepRow> out;

        auto failure_row = [&](const std::string& msg) {
            RowBuilder row(columns_);
            set_case(row, case_index);
            row.fail(msg);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            out.push_back(row.finish(secs));
            return out;
        };

        std::optional<models::ModelSystem> emitter;
        try {
            const PointParameters p = resolve_parameters(s_, values);
            if (const auto* lp = std::get_if<models::LambdaParams>(&p.emitter)) {
                emitter.emplace(models::build_lambda_emitter(*lp));
            } else {
                emitter.emplace(models::build_rb87_emitter(std::get<models::RbParams>(p.emitter)));
            }
        } catch (const std::exception& e) {
            return failure_row(std::string("curves: ") + e.what());
        }

        std::vector<double> grid;
        std::vector<double> conditional;
        double rho_ee = 0.0;
        try {
            grid = s_.tau_grid ? s_.tau_grid->values() : correlations::default_tau_grid(*emitter, s_.tau_points);
            const auto curve = correlations::conditional_excitation(*emitter, grid);
            conditional = curve.values;
            rho_ee = quantum::steady_state(emitter->liouvillian()).population(emitter->excited_level);
        } catch (const std::exception& e) {
            return failure_row(std::string("curves: ") + e.what());
        }

        const bool want_weak = std::any_of(s_.quantities.begin(), s_.quantities.end(),
                                           [](const Quantity& q) { return q.kind == QuantityKind::g2_weak; });
        double omega = 0.0, omega_r = 0.0, gamma = 1.0;
        std::string weak_setup_error;
        if (want_weak) {
            const auto p = std::get<models::LambdaParams>(resolve_parameters(s_, values).emitter);
            omega = p.omega;
            omega_r = p.omega_r;
            gamma = p.gamma1;
            if (p.gamma1 != p.gamma2 || p.delta_a != 0.0 || p.delta_e != 0.0) {
                weak_setup_error = "g2_weak: closed form needs gamma1 == gamma2 and zero detunings";
            }
        }

        const double secs_setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double per_row = secs_setup / static_cast<double>(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            RowBuilder row(columns_);
            set_case(row, case_index);
            row.set(kTauColumn, grid[i]);
            for (const auto& q : s_.quantities) {
                switch (q.kind) {
                    case QuantityKind::conditional: row.set(q.column(), conditional[i]); break;
                    case QuantityKind::g2_sigma:
                        if (rho_ee >= 1e-300) {
                            row.set(q.column(), conditional[i] / rho_ee);
                        } else {
                            row.fail("g2_sigma: steady excitation below 1e-300");
                        }
                        break;
                    case QuantityKind::g2_weak:
                        if (!weak_setup_error.empty()) {
                            row.fail(weak_setup_error);
                            break;
                        }
                        try {
                            const auto w = correlations::g2_weak_analytic(omega, omega_r, gamma, grid[i]);
                            row.set(q.column(), w.value);
                            if (!w.within_validity) row.note("g2_weak: outside the weak-drive regime");
                        } catch (const std::exception& e) {
                            row.fail(std::string("g2_weak: ") + e.what());
                        }
                        break;
                    default: break;
                }
            }
            out.push_back(row.finish(per_row));
        }
        return out;
    }

    const Scenario& s_;
    const std::vector<Column>& columns_;
    std::vector<std::vector<double>> axis_values_;
    std::size_t grid_size_ = 1;
    correlations::ProtocolOptions options_;
};

}  // namespace

std::size_t SweepResult::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == name) return i;
    }
    throw std::out_of_range("SweepResult: no column '" + std::string(name) + "'");
}

const Cell& SweepResult::at(std::size_t row, std::string_view column) const {
    return rows.at(row).cells.at(column_index(column));
}

std::optional<double> SweepResult::real(std::size_t row, std::string_view column) const {
    const Cell& c = at(row, column);
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
    return std::nullopt;
}

bool SweepResult::converged(std::size_t row) const { return std::get<bool>(at(row, "converged")); }

std::vector<Column> column_schema(const Scenario& s) {
    std::vector<Column> cols;
    if (!s.cases.empty()) cols.push_back({kCaseColumn, ColumnType::text});
    for (const auto& a : s.axes) cols.push_back({a.parameter, ColumnType::real});
    if (s.has_curves()) cols.push_back({kTauColumn, ColumnType::real});
    for (const auto& q : s.quantities) {
        cols.push_back({q.column(), ColumnType::real});
        if (uses_filtered(q)) {
            cols.push_back({q.column() + "_converged", ColumnType::flag});
            cols.push_back({q.column() + "_gc", ColumnType::real});
            cols.push_back({q.column() + "_nmax", ColumnType::integer});
        }
    }
    cols.push_back({"converged", ColumnType::flag});
    cols.push_back({"status", ColumnType::text});
    return cols;
}

SweepResult run_sweep(const Scenario& s, const SweepOptions& options) {
    validate(s);
    if (options.workers < 1) throw std::invalid_argument("run_sweep: workers must be >= 1");
    const auto start = std::chrono::steady_clock::now();

    SweepResult result;
    result.scenario = s;
    result.columns = column_schema(s);

    const Evaluator eval(s, result.columns);
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < eval.case_count(); ++c) {
        if (s.has_scalars()) {
            for (std::size_t i = 0; i < eval.grid_size(); ++i) tasks.push_back({c, false, i});
        }
        if (s.has_curves()) tasks.push_back({c, true, 0});
    }

    std::vector<std::vector<SweepRow>> slots(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            slots[i] = eval.run(tasks[i]);
            const std::size_t d = done.fetch_add(1) + 1;
            if (options.progress) {
                std::lock_guard lock(progress_mutex);
                options.progress(d, tasks.size());
            }
        }
    };
    {
        const auto n = static_cast<std::size_t>(options.workers);
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < std::min(n, tasks.size()); ++w) pool.emplace_back(work);
        work();
    }

    for (auto& slot : slots) {
        for (auto& row : slot) result.rows.push_back(std::move(row));
    }

    SolverRecord& rec = result.solver;
    rec.g_c_requested = s.model == ModelFamily::cavity ? std::nullopt : s.solver.g_c;
    if (s.model != ModelFamily::cavity && !rec.g_c_requested) rec.g_c_requested = models::SensorConfig{}.g_c;
    rec.n_max_requested = s.solver.n_max;
    rec.nmax_ceiling = s.solver.nmax_ceiling;
    rec.gc_tolerance = eval.options().gc_tolerance;
    rec.nmax_tolerance = eval.options().nmax_tolerance;
    rec.gc_floor = eval.options().gc_floor;
    rec.coupling = s.model == ModelFamily::cavity ? "cavity" : "filter";
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        if (!result.converged(r)) ++rec.unconverged_rows;
        for (const auto& q : s.quantities) {
            if (!uses_filtered(q)) continue;
            if (auto g = result.real(r, q.column() + "_gc")) {
                rec.g_c_used_min = std::min(rec.g_c_used_min.value_or(*g), *g);
                rec.g_c_used_max = std::max(rec.g_c_used_max.value_or(*g), *g);
            }
            if (auto n = result.real(r, q.column() + "_nmax")) {
                const int k = static_cast<int>(*n);
                rec.n_max_used_min = std::min(rec.n_max_used_min.value_or(k), k);
                rec.n_max_used_max = std::max(rec.n_max_used_max.value_or(k), k);
            }
        }
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

SweepResult run_sweep(const Scenario& s, int workers) {
    SweepOptions o;
    o.workers = workers;
    return run_sweep(s, o);
}

int default_workers() {
    if (const char* env = std::getenv("SHELVESIM_WORKERS")) {
        int v = 0;
        const auto* end = env + std::strlen(env);
        const auto r = std::from_chars(env, end, v);
        if (r.ec == std::errc() && r.ptr == end && v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace shelvesim::sweep
