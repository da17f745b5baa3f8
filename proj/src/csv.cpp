#include "csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace xfbci {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t row,
                  const std::string& column) {
  double v = 0.0;
  const char* b = cell.data();
  const char* e = b + cell.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  const char* tail = e;
  while (tail > b && (tail[-1] == ' ' || tail[-1] == '\t' || tail[-1] == '\r')) --tail;
  auto [p, ec] = std::from_chars(b, tail, v);
  require(ec == std::errc() && p == tail && b != tail, Errc::runtime,
          path + ": row " + std::to_string(row) + ", column '" + column +
              "': non-numeric cell '" + cell + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RawTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::runtime, "cannot open '" + path + "'");
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Errc::runtime, path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  RawTable t;
  t.columns = split_line(line);
  require(!t.columns.empty(), Errc::runtime, path + ": empty header");

  std::vector<double> flat;
  std::size_t nrows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    require(cells.size() == t.columns.size(), Errc::runtime,
            path + ": row " + std::to_string(nrows + 1) + ": expected " +
                std::to_string(t.columns.size()) + " cells, found " +
                std::to_string(cells.size()));
    for (std::size_t j = 0; j < cells.size(); ++j)
      flat.push_back(parse_cell(cells[j], path, nrows + 1, t.columns[j]));
    ++nrows;
  }
  require(nrows > 0, Errc::runtime, path + ": no data rows");
  t.values.resize(nrows, t.columns.size());
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < t.columns.size(); ++j)
      t.values(i, j) = flat[i * t.columns.size() + j];
  return t;
}

void write_csv_table(const std::string& path, const RawTable& table) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  require(out.good(), Errc::runtime, "cannot write '" + path + "'");
  for (std::size_t j = 0; j < table.columns.size(); ++j)
    out << (j ? "," : "") << table.columns[j];
  out << '\n';
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.values.cols(); ++j)
      out << (j ? "," : "") << format_double(table.values(i, j));
    out << '\n';
  }
  require(out.good(), Errc::runtime, "write failed for '" + path + "'");
}

ClientDataset dataset_from_table(const RawTable& table, const std::string& context) {
  const auto& cols = table.columns;
  int d = 0;
  while (d < static_cast<int>(cols.size()) && cols[d] == "x" + std::to_string(d + 1)) ++d;
  require(d >= 1, Errc::runtime, context + ": expected leading x1..xd columns");
  bool potentials = false;
  if (static_cast<int>(cols.size()) == d + 2) {
    require(cols[d] == "w" && cols[d + 1] == "y", Errc::runtime,
            context + ": expected columns x1..x" + std::to_string(d) + ",w,y");
  } else if (static_cast<int>(cols.size()) == d + 4) {
    require(cols[d] == "w" && cols[d + 1] == "y" && cols[d + 2] == "y0" && cols[d + 3] == "y1",
            Errc::runtime, context + ": expected trailing w,y,y0,y1");
    potentials = true;
  } else {
    throw Error(Errc::runtime, context + ": header does not match the client schema");
  }
  ClientDataset ds;
  ds.x = table.values.leftCols(d);
  ds.w = table.values.col(d);
  ds.y = table.values.col(d + 1);
  if (potentials) {
    ds.y0 = table.values.col(d + 2);
    ds.y1 = table.values.col(d + 3);
  }
  ds.validate();
  return ds;
}

RawTable table_from_dataset(const ClientDataset& ds) {
  RawTable t;
  const int d = ds.dim();
  for (int j = 0; j < d; ++j) t.columns.push_back("x" + std::to_string(j + 1));
  t.columns.push_back("w");
  t.columns.push_back("y");
  const bool potentials = ds.has_potentials();
  if (potentials) {
    t.columns.push_back("y0");
    t.columns.push_back("y1");
  }
  t.values.resize(ds.n(), d + 2 + (potentials ? 2 : 0));
  t.values.leftCols(d) = ds.x;
  t.values.col(d) = ds.w;
  t.values.col(d + 1) = ds.y;
  if (potentials) {
    t.values.col(d + 2) = ds.y0;
    t.values.col(d + 3) = ds.y1;
  }
  return t;
}

void write_world(const std::string& dir, const GeneratedWorld& world) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, Errc::runtime, "cannot create directory '" + dir + "'");
  for (std::size_t k = 0; k < world.clients.size(); ++k) {
    const std::string id = std::to_string(k + 1);
    write_csv_table(dir + "/client_" + id + ".csv", table_from_dataset(world.clients[k]));
    RawTable truths;
    const int d = static_cast<int>(world.true_theta[k].size());
    for (int j = 0; j < d; ++j) truths.columns.push_back("theta_" + std::to_string(j + 1));
    truths.columns.push_back("true_ate");
    truths.values.resize(1, d + 1);
    truths.values.block(0, 0, 1, d) = world.true_theta[k].transpose();
    truths.values(0, d) = world.true_ate[k];
    write_csv_table(dir + "/truths_" + id + ".csv", truths);
  }
}

}  // namespace xfbci
