#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "pathcalc/path.hpp"

namespace pathcalc {

struct ColumnMapping {
  std::string time_column = "time";
  // Empty selects every non-time column in file order.
  std::vector<std::string> value_columns;
  // 0 marks every selected column as traded.
  std::size_t traded_count = 0;
};

MarketFrame ingest_csv(std::istream& in, const ColumnMapping& mapping = {});
MarketFrame ingest_csv_file(const std::string& path, const ColumnMapping& mapping = {});

// Header "time,<names...>", then one row per grid point at 17 significant
// digits, so ingest reproduces every value exactly.
void export_csv(std::ostream& out, const MarketFrame& frame);
void export_csv_file(const std::string& path, const MarketFrame& frame);

// Several paths on the union of their grids, each interpolated there.
void export_paths_csv(std::ostream& out, const std::vector<SampledPath>& paths,
                      const std::vector<std::string>& names);

std::string format_double(double v);

}  // namespace pathcalc
