#ifndef COEXIST_CSV_HPP
#define COEXIST_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "coexist/planner.hpp"

namespace coexist {

/// One plot-ready table. Cells are stored already formatted.
struct CsvSeries {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws std::out_of_range.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

/// %.<precision>g, with -0 folded to 0.
std::string format_number(double v, int precision = 9);

/// Leading columns: <x_name>, SKR_bits_symbol, CapacityLoss. Diagnostics follow.
CsvSeries to_csv(const SweepResult& sweep, int precision = 9);

/// Distance series for both directions on a shared z grid:
/// z, SKR-Fw, SKR-Bw, then bit-rate and noise diagnostics.
CsvSeries merge_directions(const SweepResult& forward, const SweepResult& backward, int precision = 9);

std::string render(const CsvSeries& csv);
CsvSeries parse_csv(const std::string& text);

/// Throws std::runtime_error if the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace coexist

#endif  // COEXIST_CSV_HPP
