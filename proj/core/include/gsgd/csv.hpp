#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gsgd {

/// Locale-independent decimal formatting with `significant` significant
/// digits (default 17, which round-trips any double exactly).
std::string format_double(double v, int significant = 17);

/// Inverse of format_double.
double parse_double(const std::string& s);

/// Comma-delimited, '.' decimal point, LF line endings, UTF-8.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string str() const;
    void write_file(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Minimal reader for the files this project writes (no quoting/escapes).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace gsgd
