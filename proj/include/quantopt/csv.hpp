#ifndef QUANTOPT_CSV_HPP_
#define QUANTOPT_CSV_HPP_

#include <concepts>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace quantopt {

// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

// Quotes a field per RFC 4180 when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

// Minimal CSV emitter. Numbers use the shortest round-trip form so output
// is byte-stable for identical inputs.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  // A "# ..." line; readers in this project skip lines starting with '#'.
  void comment(std::string_view text) { out_ << "# " << text << '\n'; }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    (write_cell(cells, first), ...);
    out_ << '\n';
  }

  // Appends cells without ending the line; finish with end_row().
  void cells(std::span<const double> values) {
    for (double v : values) write_cell(v, first_in_row_);
  }
  template <class Cell>
  void cell(const Cell& value) {
    write_cell(value, first_in_row_);
  }
  void end_row() {
    out_ << '\n';
    first_in_row_ = true;
  }

 private:
  void separator(bool& first) {
    if (!first) out_ << ',';
    first = false;
  }
  void write_cell(double v, bool& first) {
    separator(first);
    out_ << format_number(v);
  }
  template <std::integral I>
  void write_cell(I v, bool& first) {
    separator(first);
    out_ << v;
  }
  void write_cell(std::string_view s, bool& first) {
    separator(first);
    out_ << csv_escape(s);
  }
  void write_cell(const std::string& s, bool& first) {
    write_cell(std::string_view(s), first);
  }
  void write_cell(const char* s, bool& first) {
    write_cell(std::string_view(s), first);
  }

  std::ostream& out_;
  bool first_in_row_ = true;
};

// Parsed numeric CSV: header names plus rows. Lines starting with '#' and
// blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Throws Error with the line number on malformed input.
CsvTable read_numeric_csv(std::istream& in);

}  // namespace quantopt

#endif  // QUANTOPT_CSV_HPP_
