#pragma once

#include <string>
#include <vector>

namespace bifree {

/// %.17g rendering: enough digits to round-trip any double exactly.
std::string format_sig17(double v);

/// RFC 4180 quoting: fields containing commas, quotes or newlines are
/// quoted, with embedded quotes doubled.
std::string csv_field(const std::string& s);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Render with '\n' line ends. When with_timestamp is set, a single
/// comment line '# generated <UTC time>' precedes the header; suppressing
/// it makes equal-config runs byte-identical.
std::string render_csv(const Table& table, bool with_timestamp);

std::string timestamp_utc();

/// Write to the path, or to stdout when the path is empty.
void write_text(const std::string& path, const std::string& content);

}  // namespace bifree
