#pragma once

#include "locopath/types.hpp"

#include <iosfwd>
#include <string>

namespace locopath {

// RFC-4180-style CSV with a mandatory header row. Every non-response column
// becomes a covariate, in header order. Parse failures report the offending
// 1-based data row.
Dataset ingest_csv(const std::string& path, const std::string& response_name);
Dataset ingest_csv_stream(std::istream& in, const std::string& response_name,
                          const std::string& label);

// Inverse of ingest: header then rows, response as the last column.
void write_csv(std::ostream& out, const Dataset& data, const std::string& response_name);

}  // namespace locopath
