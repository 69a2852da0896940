#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

namespace bsnet::io {

/// Shortest round-trippable decimal form of a double ("nan", "inf", "-inf" for
/// non-finite values).
std::string format_double(double value);
double parse_double(const std::string& text);

/// Plain comma-separated table; cells never contain commas or quotes.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    std::vector<double> numeric_column(const std::string& name) const;
};

class CsvWriter {
public:
    CsvWriter(std::vector<std::string> header) { table_.header = std::move(header); }

    CsvWriter& row(std::initializer_list<double> values);
    CsvWriter& row(std::vector<std::string> cells);

    const CsvTable& table() const noexcept { return table_; }
    void save(const std::filesystem::path& path) const;

private:
    CsvTable table_;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

} // namespace bsnet::io
