#include "qtwist/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

#include "qtwist/error.hpp"

namespace qtwist {

namespace {

constexpr std::string_view kColumns = "d,parity,r,value,error,normalised_value,vanishing,terms";

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError("scan csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

template <class Int>
Int parse_int(const std::string& s, std::size_t line) {
  Int v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw DomainError("scan csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_comment_lines(std::ostream& os, const std::vector<std::string>& lines) {
  for (const auto& l : lines) os << "# " << l << '\n';
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  for (auto& s : out) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  }
  return out;
}

void write_scan_csv(std::ostream& os, const std::vector<TwistRecord>& records, const std::vector<std::string>& header) {
  write_comment_lines(os, header);
  os << kColumns << '\n';
  for (const auto& r : records) {
    os << r.d << ',' << to_string(r.parity) << ',' << r.order << ',' << format_double(r.value) << ','
       << format_double(r.error) << ',' << format_double(r.normalised) << ',' << to_string(r.vanishing) << ','
       << r.terms << '\n';
  }
}

std::vector<TwistRecord> read_scan_csv(std::istream& is, std::vector<std::string>* header) {
  std::vector<TwistRecord> out;
  std::string line;
  std::size_t lineno = 0;
  bool seen_columns = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (header) header->push_back(line.size() > 2 ? line.substr(2) : std::string());
      continue;
    }
    if (!seen_columns) {
      if (line != kColumns) throw DomainError("scan csv: unexpected column header '" + line + "'");
      seen_columns = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw DomainError("scan csv line " + std::to_string(lineno) + ": expected 8 fields");
    TwistRecord r;
    r.d = parse_int<std::int64_t>(f[0], lineno);
    r.parity = parse_parity(f[1]);
    r.order = parse_int<int>(f[2], lineno);
    r.value = parse_double(f[3], lineno);
    r.error = parse_double(f[4], lineno);
    r.normalised = parse_double(f[5], lineno);
    if (f[6] == "true") r.vanishing = Vanishing::yes;
    else if (f[6] == "false") r.vanishing = Vanishing::no;
    else if (f[6] == "unresolved") r.vanishing = Vanishing::unresolved;
    else throw DomainError("scan csv line " + std::to_string(lineno) + ": bad vanishing flag '" + f[6] + "'");
    r.terms = parse_int<std::size_t>(f[7], lineno);
    r.negative = r.parity == Parity::even && r.value < -r.error;
    out.push_back(r);
  }
  if (!seen_columns) throw DomainError("scan csv: no column header found");
  return out;
}

}  // namespace qtwist
