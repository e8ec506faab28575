#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rislab {

// CSV with leading '# key=value' comment lines; bodies are deterministic
// (%.17g numbers, fixed row order) so identical runs are byte-identical.
class CsvWriter {
  public:
    CsvWriter(std::ostream& out, std::vector<std::string> columns);

    void comment(const std::string& key, const std::string& value);
    void comment(const std::string& key, double value);
    void comment(const std::string& key, std::uint64_t value);

    CsvWriter& field(const std::string& v);
    CsvWriter& field(double v);
    CsvWriter& field(std::uint64_t v);
    void end_row();

  private:
    void write_header_if_needed();

    std::ostream& out_;
    std::vector<std::string> columns_;
    std::size_t row_fields_ = 0;
    bool header_written_ = false;
};

struct CsvTable {
    std::vector<std::pair<std::string, std::string>> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    double number(std::size_t row, const std::string& column) const;
    std::size_t column_index(const std::string& column) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

std::string format_double(double v); // %.17g

} // namespace rislab
