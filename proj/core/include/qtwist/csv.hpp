#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qtwist/scan.hpp"

namespace qtwist {

/// Fixed 9-significant-digit formatting used for every number we write.
std::string format_double(double v);

/// Lines starting with '#' carry run metadata; they are written verbatim with
/// the prefix added and skipped on read.
void write_comment_lines(std::ostream& os, const std::vector<std::string>& lines);

/// Columns: d,parity,r,value,error,normalised_value,vanishing,terms
void write_scan_csv(std::ostream& os, const std::vector<TwistRecord>& records,
                    const std::vector<std::string>& header = {});
std::vector<TwistRecord> read_scan_csv(std::istream& is, std::vector<std::string>* header = nullptr);

/// Splits one CSV line on commas (no quoting is used by our formats).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace qtwist
