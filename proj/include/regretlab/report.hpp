#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace regretlab {

// One reported quantity. Optional fields render as empty CSV cells.
struct ReportRow {
    std::string game;
    int T = 0;
    std::string quantity;
    double value = 0.0;
    std::optional<double> stderr_;
    std::optional<double> bound;
    std::optional<bool> holds;
    std::uint64_t seed = 0;
};

// CSV with columns exactly: game,T,quantity,value,stderr,bound,holds,seed.
// Numbers carry 17 significant digits so identical runs are byte-identical.
void write_csv(std::ostream& out, std::span<const ReportRow> rows);

// Human-readable aligned table of the same rows.
void write_table(std::ostream& out, std::span<const ReportRow> rows);

// Two-column whitespace-separated plot data with a header comment naming the
// series.
void write_plot_series(std::ostream& out, const std::string& series,
                       std::span<const std::pair<double, double>> points);

std::string format_full(double v);

}  // namespace regretlab
