#include "rislab/csvio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rislab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns)
    : out_(out), columns_(std::move(columns)) {}

void CsvWriter::comment(const std::string& key, const std::string& value) {
    if (header_written_) {
        throw std::logic_error("CsvWriter: comments must precede the header");
    }
    out_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::comment(const std::string& key, double value) {
    comment(key, format_double(value));
}

void CsvWriter::comment(const std::string& key, std::uint64_t value) {
    comment(key, std::to_string(value));
}

void CsvWriter::write_header_if_needed() {
    if (header_written_) {
        return;
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out_ << (i ? "," : "") << columns_[i];
    }
    out_ << "\n";
    header_written_ = true;
}

CsvWriter& CsvWriter::field(const std::string& v) {
    write_header_if_needed();
    if (row_fields_ >= columns_.size()) {
        throw std::logic_error("CsvWriter: too many fields in row");
    }
    out_ << (row_fields_ ? "," : "") << v;
    ++row_fields_;
    return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }

CsvWriter& CsvWriter::field(std::uint64_t v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
    if (row_fields_ != columns_.size()) {
        throw std::logic_error("CsvWriter: row has " + std::to_string(row_fields_) +
                               " fields, expected " + std::to_string(columns_.size()));
    }
    out_ << "\n";
    row_fields_ = 0;
}

std::size_t CsvTable::column_index(const std::string& column) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == column) {
            return i;
        }
    }
    throw std::out_of_range("csv: no column named " + column);
}

double CsvTable::number(std::size_t row, const std::string& column) const {
    return std::strtod(rows.at(row).at(column_index(column)).c_str(), nullptr);
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            const auto eq = body.find('=');
            if (eq == std::string::npos) {
                table.comments.emplace_back(body, "");
            } else {
                table.comments.emplace_back(body.substr(0, eq), body.substr(eq + 1));
            }
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            fields.push_back(tok);
        }
        if (!line.empty() && line.back() == ',') {
            fields.push_back("");
        }
        if (!have_header) {
            table.columns = std::move(fields);
            have_header = true;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    if (!have_header) {
        throw std::runtime_error("csv: missing header row");
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    return read_csv(in);
}

} // namespace rislab
