#include "pathcalc/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pathcalc/error.hpp"

namespace pathcalc {

namespace {

std::string trim(std::string s) {
  auto blank = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && blank(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && blank(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, std::size_t row, std::size_t col) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (cell.empty() || end != begin + cell.size() || errno == ERANGE) {
    std::ostringstream os;
    os << "line " << row << ", column " << col + 1 << ": '" << cell << "' is not a number";
    fail(ErrorCode::ParseError, os.str());
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MarketFrame ingest_csv(std::istream& in, const ColumnMapping& mapping) {
  std::string line;
  std::size_t row = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) fail(ErrorCode::ParseError, "missing header row");

  auto find = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) fail(ErrorCode::MissingColumn, "no column named '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t time_idx = find(mapping.time_column);
  std::vector<std::size_t> idx;
  std::vector<std::string> names;
  if (mapping.value_columns.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (j != time_idx) {
        idx.push_back(j);
        names.push_back(header[j]);
      }
  } else {
    for (const auto& n : mapping.value_columns) {
      idx.push_back(find(n));
      names.push_back(n);
    }
  }
  if (idx.empty()) fail(ErrorCode::MissingColumn, "no value columns");
  std::size_t traded = mapping.traded_count == 0 ? idx.size() : mapping.traded_count;
  if (traded > idx.size()) fail(ErrorCode::BadParameter, "traded_count exceeds the number of value columns");

  std::vector<double> times;
  std::vector<std::vector<double>> cols(idx.size());
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (cells.size() != header.size()) {
      std::ostringstream os;
      os << "line " << row << " has " << cells.size() << " cells, header has " << header.size();
      fail(ErrorCode::ParseError, os.str());
    }
    double t = parse_number(cells[time_idx], row, time_idx);
    if (!times.empty() && !(t > times.back())) {
      std::ostringstream os;
      os << "line " << row << ": time " << cells[time_idx] << " does not increase";
      fail(ErrorCode::NonMonotoneTimes, os.str());
    }
    times.push_back(t);
    for (std::size_t j = 0; j < idx.size(); ++j) cols[j].push_back(parse_number(cells[idx[j]], row, idx[j]));
  }
  if (times.size() < 2) fail(ErrorCode::LengthMismatch, "need at least two data rows");
  return MarketFrame(make_grid(std::move(times)), std::move(cols), std::move(names), traded);
}

MarketFrame ingest_csv_file(const std::string& path, const ColumnMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IOError, "cannot open '" + path + "'");
  return ingest_csv(in, mapping);
}

void export_csv(std::ostream& out, const MarketFrame& frame) {
  out << "time";
  for (const auto& n : frame.names()) out << ',' << n;
  out << '\n';
  auto t = frame.times();
  for (std::size_t i = 0; i < t.size(); ++i) {
    out << format_double(t[i]);
    for (std::size_t j = 0; j < frame.column_count(); ++j) out << ',' << format_double(frame.column_values(j)[i]);
    out << '\n';
  }
}

void export_csv_file(const std::string& path, const MarketFrame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IOError, "cannot write '" + path + "'");
  export_csv(out, frame);
  if (!out) fail(ErrorCode::IOError, "write to '" + path + "' failed");
}

void export_paths_csv(std::ostream& out, const std::vector<SampledPath>& paths,
                      const std::vector<std::string>& names) {
  if (paths.empty()) fail(ErrorCode::DimensionMismatch, "no paths to export");
  if (names.size() != paths.size()) fail(ErrorCode::DimensionMismatch, "one name per path required");
  std::vector<std::span<const double>> parts;
  for (const auto& p : paths) parts.push_back(p.times());
  auto grid = make_grid(merge_sorted(parts));
  std::vector<std::vector<double>> vals;
  for (const auto& p : paths) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
      double t = (*grid)[i];
      v[i] = p.covers(t) ? p.sample_at(t) : (t < p.front_time() ? p.front() : p.back());
    }
    vals.push_back(std::move(v));
  }
  out << "time";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < grid->size(); ++i) {
    out << format_double((*grid)[i]);
    for (const auto& v : vals) out << ',' << format_double(v[i]);
    out << '\n';
  }
}

}  // namespace pathcalc
