#include "runner/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aqsens::runner {

namespace {

bool needs_quoting(const std::string& cell) {
    return cell.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quoted(const std::string& cell) {
    if (!needs_quoting(cell)) return cell;
    std::string out = "\"";
    for (const char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

CsvTable::Row CsvTable::row() { return Row(*this); }

CsvTable::Row& CsvTable::Row::add(const std::string& text) {
    cells_.push_back(text);
    return *this;
}

CsvTable::Row& CsvTable::Row::add(double value) {
    if (std::isnan(value)) throw std::invalid_argument("CsvTable: NaN cell rejected");
    cells_.push_back(format_double(value));
    return *this;
}

CsvTable::Row& CsvTable::Row::add(std::int64_t value) {
    cells_.push_back(std::to_string(value));
    return *this;
}

CsvTable::Row& CsvTable::Row::add(std::uint64_t value) {
    cells_.push_back(std::to_string(value));
    return *this;
}

CsvTable::Row& CsvTable::Row::add(bool value) {
    cells_.push_back(value ? "true" : "false");
    return *this;
}

void CsvTable::commit(Row&& row) {
    if (row.cells_.size() != columns_.size()) {
        std::ostringstream msg;
        msg << "CsvTable: row has " << row.cells_.size() << " cells, header has "
            << columns_.size();
        throw std::invalid_argument(msg.str());
    }
    rows_.push_back(std::move(row.cells_));
}

std::string CsvTable::to_string() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c > 0) out << ',';
        out << quoted(columns_[c]);
    }
    out << "\r\n";
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out << ',';
            out << quoted(row[c]);
        }
        out << "\r\n";
    }
    return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("CsvTable: cannot open " + path.string());
    file << to_string();
    if (!file) throw std::runtime_error("CsvTable: write failed for " + path.string());
}

}  // namespace aqsens::runner
