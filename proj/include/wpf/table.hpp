#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wpf {

enum class TableFormat { Csv, Jsonl };

TableFormat parse_table_format(std::string_view name);
std::string_view extension(TableFormat fmt);

/// A rectangular string table, the common output shape of every report.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
    bool empty() const { return rows.empty(); }
};

void write_csv(std::ostream& os, const Table& table);
/// One JSON object per row, keys in header order. Cells stay strings.
void write_jsonl(std::ostream& os, const Table& table);
void write_table(const std::filesystem::path& path, const Table& table, TableFormat fmt);

/// RFC 4180 reader (quoted fields, doubled quotes). Blank lines are skipped.
std::vector<std::vector<std::string>> read_csv(std::istream& is);

std::string csv_escape(std::string_view field);
std::string format_double(double v, int precision = 6);

}  // namespace wpf
