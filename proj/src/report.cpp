#include "regretlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>

namespace regretlab {

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, std::span<const ReportRow> rows) {
    out << "game,T,quantity,value,stderr,bound,holds,seed\n";
    for (const auto& r : rows) {
        out << r.game << ',' << r.T << ',' << r.quantity << ',' << format_full(r.value) << ',';
        if (r.stderr_) out << format_full(*r.stderr_);
        out << ',';
        if (r.bound) out << format_full(*r.bound);
        out << ',';
        if (r.holds) out << (*r.holds ? "true" : "false");
        out << ',' << r.seed << '\n';
    }
}

void write_table(std::ostream& out, std::span<const ReportRow> rows) {
    std::size_t gw = 4, qw = 8;
    for (const auto& r : rows) {
        gw = std::max(gw, r.game.size());
        qw = std::max(qw, r.quantity.size());
    }
    out << std::left << std::setw(static_cast<int>(gw + 2)) << "game" << std::setw(4) << "T"
        << std::setw(static_cast<int>(qw + 2)) << "quantity" << std::setw(25) << "value"
        << std::setw(25) << "stderr" << std::setw(25) << "bound" << std::setw(7) << "holds"
        << "seed\n";
    for (const auto& r : rows) {
        out << std::left << std::setw(static_cast<int>(gw + 2)) << r.game << std::setw(4) << r.T
            << std::setw(static_cast<int>(qw + 2)) << r.quantity << std::setw(25)
            << format_full(r.value) << std::setw(25) << (r.stderr_ ? format_full(*r.stderr_) : "-")
            << std::setw(25) << (r.bound ? format_full(*r.bound) : "-") << std::setw(7)
            << (r.holds ? (*r.holds ? "yes" : "NO") : "-") << r.seed << '\n';
    }
}

void write_plot_series(std::ostream& out, const std::string& series,
                       std::span<const std::pair<double, double>> points) {
    out << "# series: " << series << '\n';
    for (const auto& [x, y] : points) out << format_full(x) << ' ' << format_full(y) << '\n';
}

}  // namespace regretlab
