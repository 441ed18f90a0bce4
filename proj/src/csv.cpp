#include "coexist/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coexist {

std::size_t CsvSeries::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::out_of_range("no column '" + name + "'");
}

double CsvSeries::number(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(column(name)));
}

std::string format_number(double v, int precision) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

CsvSeries to_csv(const SweepResult& sweep, int precision) {
    CsvSeries csv;
    csv.header = {sweep.x_name, "SKR_bits_symbol", "CapacityLoss", "SKR_bps",   "xi_SNU",  "T",
                  "P_fwm_deg_W", "P_fwm_nondeg_W",  "P_sprs_W",     "P_int_W", "Direction"};
    auto f = [precision](double v) { return format_number(v, precision); };
    for (const auto& r : sweep.rows) {
        csv.rows.push_back({f(r.x), f(r.skr_bits), f(r.capacity_loss), f(r.skr_bps), f(r.xi), f(r.transmittance),
                            f(r.breakdown.p_fwm_degenerate), f(r.breakdown.p_fwm_nondegenerate),
                            f(r.breakdown.p_sprs), f(r.breakdown.total), std::string(to_string(r.direction))});
    }
    return csv;
}

CsvSeries merge_directions(const SweepResult& forward, const SweepResult& backward, int precision) {
    if (forward.rows.size() != backward.rows.size())
        throw std::invalid_argument("direction series have different lengths");
    CsvSeries csv;
    csv.header = {"z", "SKR-Fw", "SKR-Bw", "SKR-Fw_bps", "SKR-Bw_bps", "xi-Fw_SNU", "xi-Bw_SNU", "T"};
    auto f = [precision](double v) { return format_number(v, precision); };
    for (std::size_t i = 0; i < forward.rows.size(); ++i) {
        const auto& a = forward.rows[i];
        const auto& b = backward.rows[i];
        if (a.x != b.x) throw std::invalid_argument("direction series use different z grids");
        csv.rows.push_back({f(a.x), f(a.skr_bits), f(b.skr_bits), f(a.skr_bps), f(b.skr_bps), f(a.xi), f(b.xi),
                            f(a.transmittance)});
    }
    return csv;
}

std::string render(const CsvSeries& csv) {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(csv.header);
    for (const auto& r : csv.rows) {
        if (r.size() != csv.header.size()) throw std::logic_error("ragged CSV row");
        line(r);
    }
    return out;
}

CsvSeries parse_csv(const std::string& text) {
    CsvSeries csv;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            csv.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != csv.header.size()) throw std::invalid_argument("ragged CSV row: " + line);
            csv.rows.push_back(std::move(cells));
        }
    }
    return csv;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace coexist
