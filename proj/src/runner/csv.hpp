#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aqsens::runner {

/// RFC-4180-style CSV table: UTF-8, '.' decimal separator, doubles at
/// full precision (17 significant digits) so plotting downstream is
/// lossless. The header row is mandatory and schema_version is always the
/// first column. NaN cells are rejected at insertion time.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> columns);

    class Row {
      public:
        Row& add(const std::string& text);
        Row& add(double value);
        Row& add(std::int64_t value);
        Row& add(std::uint64_t value);
        Row& add(bool value);

      private:
        friend class CsvTable;
        explicit Row(CsvTable& table) : table_(table) {}
        CsvTable& table_;
        std::vector<std::string> cells_;
    };

    Row row();
    void commit(Row&& row);
    std::size_t row_count() const { return rows_.size(); }

    std::string to_string() const;
    void write(const std::filesystem::path& path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double value);

inline constexpr int kSchemaVersion = 1;

}  // namespace aqsens::runner
