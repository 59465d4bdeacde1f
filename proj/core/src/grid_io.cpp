#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mdnuc/error.hpp"
#include "mdnuc/terrain.hpp"

namespace mdnuc {

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
};

double parse_number(std::string_view text, std::size_t line) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw FormatError("non-numeric token '" + std::string(text) + "'", line);
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    const std::size_t start = k;
    while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k]))) ++k;
    if (k > start) out.push_back(s.substr(start, k - start));
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

double to_depth(double value, bool elevation, std::size_t line) {
  const double d = elevation ? -value : value;
  if (!std::isfinite(d)) throw FormatError("depth is not finite", line);
  if (d <= 0.0) throw FormatError("depth " + std::to_string(d) + " is not positive after sign conversion", line);
  return d;
}

bool near_roi(const RoiPolygon& roi, Vec2 p, double margin) {
  if (roi.contains(p)) return true;
  const auto v = roi.vertices();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (point_segment_distance(p, v[k], v[(k + 1) % v.size()]) <= margin) return true;
  }
  return false;
}

// Fills missing nodes with the value of the nearest valid node in grid steps.
void fill_nodata(std::vector<double>& depths, std::vector<char>& valid, std::size_t nx, std::size_t ny) {
  std::deque<std::size_t> queue;
  for (std::size_t k = 0; k < depths.size(); ++k) {
    if (valid[k]) queue.push_back(k);
  }
  if (queue.empty()) throw FormatError("grid contains no valid depth", 0);
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    const std::size_t i = k % nx;
    const std::size_t j = k / nx;
    const auto visit = [&](std::size_t n) {
      if (!valid[n]) {
        valid[n] = 1;
        depths[n] = depths[k];
        queue.push_back(n);
      }
    };
    if (i > 0) visit(k - 1);
    if (i + 1 < nx) visit(k + 1);
    if (j > 0) visit(k - nx);
    if (j + 1 < ny) visit(k + nx);
  }
}

Heightfield load_esri(std::istream& in, const GridReadOptions& options) {
  std::map<std::string, std::pair<double, std::size_t>> header;
  std::string line;
  std::size_t line_no = 0;
  std::vector<Token> values;
  std::vector<std::string> storage;
  // Header lines are "key value"; the first line starting with a number begins
  // the data block.
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    const char c = tokens[0].front();
    const bool numeric = std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
    if (!numeric) {
      if (tokens.size() != 2) throw FormatError("malformed header line", line_no);
      header[lower(tokens[0])] = {parse_number(tokens[1], line_no), line_no};
      continue;
    }
    storage.push_back(line);
    break;
  }
  const auto require = [&](const char* key) {
    const auto it = header.find(key);
    if (it == header.end()) throw FormatError(std::string("missing header field ") + key, line_no);
    return it->second.first;
  };
  const double ncols = require("ncols");
  const double nrows = require("nrows");
  const double cell = require("cellsize");
  if (ncols < 2 || nrows < 2 || ncols != std::floor(ncols) || nrows != std::floor(nrows)) {
    throw FormatError("ncols and nrows must be integers >= 2", 0);
  }
  if (!(cell > 0.0)) throw FormatError("cellsize must be > 0", 0);
  Vec2 origin;
  if (header.contains("xllcorner")) {
    origin.x = header["xllcorner"].first + 0.5 * cell;
  } else {
    origin.x = require("xllcenter");
  }
  if (header.contains("yllcorner")) {
    origin.y = header["yllcorner"].first + 0.5 * cell;
  } else {
    origin.y = require("yllcenter");
  }
  std::optional<double> nodata;
  if (header.contains("nodata_value")) nodata = header["nodata_value"].first;

  const auto nx = static_cast<std::size_t>(ncols);
  const auto ny = static_cast<std::size_t>(nrows);
  std::vector<double> depths(nx * ny, 0.0);
  std::vector<char> valid(nx * ny, 1);
  std::size_t count = 0;
  const auto consume = [&](const std::string& text, std::size_t at) {
    for (const auto tok : split_ws(text)) {
      if (count >= nx * ny) throw FormatError("more values than ncols*nrows", at);
      const double v = parse_number(tok, at);
      const std::size_t row = count / nx;  // row 0 is the northernmost
      const std::size_t i = count % nx;
      const std::size_t j = ny - 1 - row;
      const std::size_t k = j * nx + i;
      if (nodata && v == *nodata) {
        valid[k] = 0;
        const Vec2 p{origin.x + static_cast<double>(i) * cell, origin.y + static_cast<double>(j) * cell};
        if (options.roi == nullptr || near_roi(*options.roi, p, 1.5 * cell)) {
          throw FormatError("NODATA value inside the region of interest", at);
        }
      } else {
        depths[k] = to_depth(v, options.values_are_elevation, at);
      }
      ++count;
    }
  };
  if (!storage.empty()) consume(storage.front(), line_no);
  while (std::getline(in, line)) {
    ++line_no;
    consume(line, line_no);
  }
  if (count != nx * ny) throw FormatError("expected " + std::to_string(nx * ny) + " values, found " +
                                              std::to_string(count), line_no);
  if (std::find(valid.begin(), valid.end(), 0) != valid.end()) fill_nodata(depths, valid, nx, ny);
  return Heightfield(origin, cell, nx, ny, std::move(depths));
}

Heightfield load_xyz(std::istream& in, const GridReadOptions& options) {
  struct Sample {
    double x, y, d;
    std::size_t line;
  };
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (tokens.size() != 3) throw FormatError("expected 'x y depth'", line_no);
    const double x = parse_number(tokens[0], line_no);
    const double y = parse_number(tokens[1], line_no);
    const double d = to_depth(parse_number(tokens[2], line_no), options.values_are_elevation, line_no);
    if (!std::isfinite(x) || !std::isfinite(y)) throw FormatError("coordinate is not finite", line_no);
    samples.push_back({x, y, d, line_no});
  }
  if (samples.size() < 4) throw FormatError("xyz grid needs at least 2x2 nodes", line_no);

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& s : samples) {
    xs.push_back(s.x);
    ys.push_back(s.y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  const std::size_t nx = xs.size();
  const std::size_t ny = ys.size();
  if (nx < 2 || ny < 2) throw FormatError("xyz grid needs at least 2x2 nodes", 0);
  const double cell = (xs.back() - xs.front()) / static_cast<double>(nx - 1);
  const double cell_y = (ys.back() - ys.front()) / static_cast<double>(ny - 1);
  const double tol = 1e-6 * cell;
  if (std::abs(cell - cell_y) > tol) throw FormatError("x and y spacing differ", 0);
  for (std::size_t i = 1; i < nx; ++i) {
    if (std::abs(xs[i] - xs[i - 1] - cell) > tol) throw FormatError("irregular x spacing", 0);
  }
  for (std::size_t j = 1; j < ny; ++j) {
    if (std::abs(ys[j] - ys[j - 1] - cell) > tol) throw FormatError("irregular y spacing", 0);
  }
  if (samples.size() != nx * ny) {
    throw FormatError("ragged grid: " + std::to_string(samples.size()) + " samples for " + std::to_string(nx) + "x" +
                          std::to_string(ny) + " nodes",
                      samples.back().line);
  }
  std::vector<double> depths(nx * ny, 0.0);
  std::vector<char> seen(nx * ny, 0);
  for (const auto& s : samples) {
    const auto i = static_cast<std::size_t>(std::lround((s.x - xs.front()) / cell));
    const auto j = static_cast<std::size_t>(std::lround((s.y - ys.front()) / cell));
    const std::size_t k = j * nx + i;
    if (seen[k]) throw FormatError("duplicate grid node", s.line);
    seen[k] = 1;
    depths[k] = s.d;
  }
  return Heightfield({xs.front(), ys.front()}, cell, nx, ny, std::move(depths));
}

}  // namespace

Heightfield load_grid(std::istream& in, GridFormat format, const GridReadOptions& options) {
  return format == GridFormat::EsriAscii ? load_esri(in, options) : load_xyz(in, options);
}

void save_grid(std::ostream& out, const Heightfield& hf, GridFormat format) {
  char buf[128];
  if (format == GridFormat::EsriAscii) {
    const double cs = hf.cell_size();
    std::snprintf(buf, sizeof buf, "ncols %zu\nnrows %zu\n", hf.nx(), hf.ny());
    out << buf;
    std::snprintf(buf, sizeof buf, "xllcorner %.17g\nyllcorner %.17g\ncellsize %.17g\nNODATA_value -9999\n",
                  hf.origin().x - 0.5 * cs, hf.origin().y - 0.5 * cs, cs);
    out << buf;
    for (std::size_t row = 0; row < hf.ny(); ++row) {
      const std::size_t j = hf.ny() - 1 - row;
      for (std::size_t i = 0; i < hf.nx(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", hf.node(i, j));
        if (i > 0) out << ' ';
        out << buf;
      }
      out << '\n';
    }
    return;
  }
  for (std::size_t j = 0; j < hf.ny(); ++j) {
    for (std::size_t i = 0; i < hf.nx(); ++i) {
      const Vec2 p = hf.node_position(i, j);
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x, p.y, hf.node(i, j));
      out << buf;
    }
  }
}

}  // namespace mdnuc
