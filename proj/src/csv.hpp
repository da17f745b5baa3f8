#pragma once

#include <string>
#include <vector>

#include "synth.hpp"

namespace xfbci {

// Strict numeric CSV: header row of column names, '.' decimal, LF endings.
// Parse failures name the file, 1-based data row, and column.
RawTable read_csv_table(const std::string& path);

void write_csv_table(const std::string& path, const RawTable& table);

// The client dataset schema: x1..xd,w,y with optional y0,y1 tail columns.
ClientDataset dataset_from_table(const RawTable& table, const std::string& context);
RawTable table_from_dataset(const ClientDataset& ds);

// client_<id>.csv plus truths_<id>.csv (theta_1..theta_d,true_ate), ids 1-based.
void write_world(const std::string& dir, const GeneratedWorld& world);

std::string format_double(double v);  // %.17g, parse round-trip exact

}  // namespace xfbci
