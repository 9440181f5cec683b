#include "geoeval/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace geoeval {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_value(const std::string& field, std::size_t line_no, const std::string& column) {
  const std::string t = trim(field);
  const char* begin = t.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ValueError("line " + std::to_string(line_no) + ": column '" + column +
                     "' is not numeric: '" + field + "'");
  if (!std::isfinite(v))
    throw ValueError("line " + std::to_string(line_no) + ": column '" + column +
                     "' is not finite: '" + field + "'");
  return v;
}

int parse_index(const std::string& field, std::size_t line_no, const std::string& column) {
  const std::string t = trim(field);
  const char* begin = t.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0' || v < 0)
    throw ValueError("line " + std::to_string(line_no) + ": column '" + column +
                     "' is not a non-negative integer: '" + field + "'");
  return static_cast<int>(v);
}

// Accepts `# width=W height=H`; any other comment is ignored.
bool parse_dims_comment(const std::string& line, int& width, int& height) {
  const std::size_t wp = line.find("width=");
  const std::size_t hp = line.find("height=");
  if (wp == std::string::npos || hp == std::string::npos) return false;
  width = std::atoi(line.c_str() + wp + 6);
  height = std::atoi(line.c_str() + hp + 7);
  return width > 0 && height > 0;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::size_t Grid::n_valid() const {
  std::size_t n = 0;
  for (std::uint8_t m : valid_mask) n += m != 0;
  return n;
}

std::vector<Location> Grid::valid_cells() const {
  std::vector<Location> cells;
  cells.reserve(n_valid());
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      if (valid_mask[static_cast<std::size_t>(r) * width + c]) cells.push_back({r, c});
  return cells;
}

Grid load_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open grid CSV: " + path);

  std::string line;
  std::size_t line_no = 0;
  int meta_width = 0, meta_height = 0;
  bool have_meta = false;

  // Optional leading comment with explicit dimensions.
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  ++line_no;
  if (!line.empty() && line[0] == '#') {
    have_meta = parse_dims_comment(line, meta_width, meta_height);
    if (!std::getline(in, line)) throw ParseError(path + ": missing header row");
    ++line_no;
  }

  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "row" || header[1] != "col" ||
      header.back() != "target")
    throw ParseError(path + ": header must be row,col,<covariates...>,target");
  std::vector<std::string> names(header.begin() + 2, header.end() - 1);
  {
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
      if (n.empty() || !seen.insert(n).second)
        throw ParseError(path + ": covariate names must be unique and non-empty");
    }
  }
  const std::size_t p = names.size();
  const std::size_t n_cols = p + 3;

  struct Row {
    int row, col;
    std::vector<double> values;  // p covariates then target
  };
  std::vector<Row> rows;
  std::unordered_set<std::uint64_t> seen_cells;
  int max_row = -1, max_col = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != n_cols)
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(n_cols) + " fields, got " +
                       std::to_string(fields.size()));
    Row r;
    r.row = parse_index(fields[0], line_no, "row");
    r.col = parse_index(fields[1], line_no, "col");
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(r.row)) << 32) |
        static_cast<std::uint32_t>(r.col);
    if (!seen_cells.insert(key).second)
      throw DuplicateCellError("line " + std::to_string(line_no) + ": duplicate cell (" +
                               std::to_string(r.row) + "," + std::to_string(r.col) + ")");
    r.values.reserve(p + 1);
    for (std::size_t j = 0; j < p; ++j)
      r.values.push_back(parse_value(fields[2 + j], line_no, names[j]));
    r.values.push_back(parse_value(fields[2 + p], line_no, "target"));
    max_row = std::max(max_row, r.row);
    max_col = std::max(max_col, r.col);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ParseError(path + ": no data rows");

  Grid grid;
  grid.width = have_meta ? meta_width : max_col + 1;
  grid.height = have_meta ? meta_height : max_row + 1;
  if (max_col >= grid.width || max_row >= grid.height)
    throw ParseError(path + ": cell outside declared width/height");
  grid.covariate_names = std::move(names);
  const std::size_t n_cells = grid.n_cells();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  grid.covariates.assign(p, std::vector<double>(n_cells, nan));
  grid.target.assign(n_cells, nan);
  grid.valid_mask.assign(n_cells, 0);
  for (const Row& r : rows) {
    const std::size_t idx = grid.cell_index({r.row, r.col});
    for (std::size_t j = 0; j < p; ++j) grid.covariates[j][idx] = r.values[j];
    grid.target[idx] = r.values[p];
    grid.valid_mask[idx] = 1;
  }
  return grid;
}

void save_grid_csv(const Grid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write grid CSV: " + path);
  out << "# width=" << grid.width << " height=" << grid.height << "\n";
  out << "row,col";
  for (const auto& n : grid.covariate_names) out << ',' << n;
  out << ",target\n";
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * grid.width + c;
      if (!grid.valid_mask[idx]) continue;
      out << r << ',' << c;
      for (const auto& layer : grid.covariates) out << ',' << format_double(layer[idx]);
      out << ',' << format_double(grid.target[idx]) << "\n";
    }
  }
  if (!out) throw Error("write failed: " + path);
}

SampleSet extract_samples(const Grid& grid, const std::vector<Location>& locs) {
  SampleSet set;
  set.covariate_names = grid.covariate_names;
  set.locations = locs;
  set.features = Matrix(locs.size(), grid.p());
  set.target.resize(locs.size());
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < locs.size(); ++i) {
    const Location& loc = locs[i];
    if (!grid.in_bounds(loc))
      throw LocationError("location " + std::to_string(i) + " out of bounds (" +
                          std::to_string(loc.row) + "," + std::to_string(loc.col) + ")");
    if (!grid.is_valid(loc))
      throw LocationError("location " + std::to_string(i) + " is masked (" +
                          std::to_string(loc.row) + "," + std::to_string(loc.col) + ")");
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(loc.row)) << 32) |
        static_cast<std::uint32_t>(loc.col);
    if (!seen.insert(key).second)
      throw LocationError("location " + std::to_string(i) + " duplicates an earlier one");
    const std::size_t idx = grid.cell_index(loc);
    for (std::size_t j = 0; j < grid.p(); ++j) set.features(i, j) = grid.covariates[j][idx];
    set.target[i] = grid.target[idx];
  }
  return set;
}

PredictionSet complement_predictions(const Grid& grid, const SampleSet& samples) {
  std::vector<std::uint8_t> taken(grid.n_cells(), 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Location& loc = samples.locations[i];
    if (!grid.is_valid(loc))
      throw LocationError("sample " + std::to_string(i) + " is not a valid grid cell");
    taken[grid.cell_index(loc)] = 1;
  }
  PredictionSet preds;
  preds.covariate_names = grid.covariate_names;
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * grid.width + c;
      if (grid.valid_mask[idx] && !taken[idx]) preds.locations.push_back({r, c});
    }
  }
  if (preds.locations.empty())
    throw InsufficientDataError("prediction set is empty: samples cover every valid cell");
  preds.features = Matrix(preds.locations.size(), grid.p());
  preds.target_truth.resize(preds.locations.size());
  for (std::size_t i = 0; i < preds.locations.size(); ++i) {
    const std::size_t idx = grid.cell_index(preds.locations[i]);
    for (std::size_t j = 0; j < grid.p(); ++j) preds.features(i, j) = grid.covariates[j][idx];
    preds.target_truth[i] = grid.target[idx];
  }
  return preds;
}

std::vector<Location> load_locations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open locations CSV: " + path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  ++line_no;
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "row" || header[1] != "col")
    throw ParseError(path + ": header must start with row,col");
  std::vector<Location> locs;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 2)
      throw ParseError("line " + std::to_string(line_no) + ": expected row,col");
    locs.push_back({parse_index(fields[0], line_no, "row"),
                    parse_index(fields[1], line_no, "col")});
  }
  return locs;
}

}  // namespace geoeval
