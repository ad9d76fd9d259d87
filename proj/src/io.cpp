#include "augsc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace augsc {

namespace {

std::string ext_of(const std::string& path) {
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string e = path.substr(dot + 1);
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e;
}

double parse_double(const char* begin, const char* end, const std::string& path, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(Errc::ParseError, path + ":" + std::to_string(line) + ": bad numeric field '" +
                                      std::string(begin, end) + "'");
  }
  if (!std::isfinite(v)) {
    throw Error(Errc::NonFinite, path + ":" + std::to_string(line) + ": non-finite value");
  }
  return v;
}

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw Error(Errc::Truncated, path + ": unexpected end of file in header");
  }
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

// Bilinear lookup in a row-major h x w buffer with edge clamping.
double sample_clamped(const std::vector<double>& img, int h, int w, double y, double x) {
  y = std::clamp(y, 0.0, double(h - 1));
  x = std::clamp(x, 0.0, double(w - 1));
  int y0 = static_cast<int>(std::floor(y));
  int x0 = static_cast<int>(std::floor(x));
  int y1 = std::min(y0 + 1, h - 1);
  int x1 = std::min(x0 + 1, w - 1);
  double fy = y - y0, fx = x - x0;
  double v00 = img[static_cast<std::size_t>(y0) * w + x0], v01 = img[static_cast<std::size_t>(y0) * w + x1];
  double v10 = img[static_cast<std::size_t>(y1) * w + x0], v11 = img[static_cast<std::size_t>(y1) * w + x1];
  return (1 - fy) * ((1 - fx) * v00 + fx * v01) + fy * ((1 - fx) * v10 + fx * v11);
}

void resize_bilinear(const std::vector<double>& src, int sh, int sw, std::vector<double>& dst,
                     int th, int tw) {
  dst.resize(static_cast<std::size_t>(th) * tw);
  double sy = double(sh) / th, sx = double(sw) / tw;
  for (int r = 0; r < th; ++r) {
    for (int c = 0; c < tw; ++c) {
      double y = (r + 0.5) * sy - 0.5;
      double x = (c + 0.5) * sx - 0.5;
      dst[static_cast<std::size_t>(r) * tw + c] = sample_clamped(src, sh, sw, y, x);
    }
  }
}

int pgm_token(std::istream& in, const std::string& path) {
  // Skips whitespace and '#' comment lines, then reads one decimal token.
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF) throw Error(Errc::Truncated, path + ": truncated header");
  if (!std::isdigit(c)) throw Error(Errc::ParseError, path + ": malformed header token");
  long v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    if (v > 1 << 30) throw Error(Errc::ParseError, path + ": header value out of range");
    c = in.get();
  }
  if (c != EOF) in.unget();
  return static_cast<int>(v);
}

std::vector<double> load_pgm(const std::string& path, int* h_out, int* w_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, path + ": cannot open");
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || m1 != '5') {
    throw Error(Errc::MagicMismatch, path + ": not a binary PGM (P5) file");
  }
  int w = pgm_token(in, path);
  int h = pgm_token(in, path);
  int maxval = pgm_token(in, path);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) {
    throw Error(Errc::ParseError, path + ": bad PGM dimensions");
  }
  in.get();  // single whitespace byte separating header and payload
  std::size_t count = static_cast<std::size_t>(h) * w;
  std::vector<double> img(count);
  if (maxval < 256) {
    std::vector<unsigned char> buf(count);
    if (!in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(count))) {
      throw Error(Errc::Truncated, path + ": pixel payload shorter than header promises");
    }
    for (std::size_t i = 0; i < count; ++i) img[i] = double(buf[i]) / maxval;
  } else {
    std::vector<unsigned char> buf(count * 2);
    if (!in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(count * 2))) {
      throw Error(Errc::Truncated, path + ": pixel payload shorter than header promises");
    }
    for (std::size_t i = 0; i < count; ++i) {
      img[i] = double((unsigned(buf[2 * i]) << 8) | buf[2 * i + 1]) / maxval;
    }
  }
  *h_out = h;
  *w_out = w;
  return img;
}

}  // namespace

DataMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, path + ": cannot open");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    std::vector<double> row;
    const char* p = line.c_str();
    const char* end = p + line.size();
    while (p < end) {
      const char* comma = static_cast<const char*>(std::memchr(p, ',', static_cast<std::size_t>(end - p)));
      const char* fe = comma ? comma : end;
      const char* b = p;
      while (b < fe && (*b == ' ' || *b == '\t')) ++b;
      const char* e = fe;
      while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
      if (b == e) throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": empty field");
      row.push_back(parse_double(b, e, path, lineno));
      p = comma ? comma + 1 : end;
    }
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": expected " +
                                        std::to_string(width) + " fields, got " +
                                        std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2 || width < 1) {
    throw Error(Errc::ParseError, path + ": need at least two sample rows");
  }
  // Rows are samples; store samples as columns.
  Matrix m(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < width; ++i) m(Eigen::Index(i), Eigen::Index(j)) = rows[j][i];
  return DataMatrix(std::move(m));
}

void save_matrix_csv(const std::string& path, const DataMatrix& x) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::ParseError, path + ": cannot open for writing");
  out << "# samples=" << x.count() << " dim=" << x.dim() << "\n";
  char buf[40];
  for (int j = 0; j < x.count(); ++j) {
    for (int i = 0; i < x.dim(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", x.values(i, j));
      out << buf << (i + 1 < x.dim() ? "," : "\n");
    }
  }
  if (!out) throw Error(Errc::ParseError, path + ": write failed");
}

DataMatrix load_matrix_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, path + ": cannot open");
  char magic[4];
  if (!in.read(magic, 4)) throw Error(Errc::Truncated, path + ": missing magic");
  if (std::memcmp(magic, "ASCM", 4) != 0) {
    throw Error(Errc::MagicMismatch, path + ": bad magic, not a matrix file");
  }
  std::uint32_t version = 0;
  std::uint64_t rows = 0, cols = 0;
  if (!in.read(reinterpret_cast<char*>(&version), 4) ||
      !in.read(reinterpret_cast<char*>(&rows), 8) || !in.read(reinterpret_cast<char*>(&cols), 8)) {
    throw Error(Errc::Truncated, path + ": truncated header");
  }
  if (version != 1) {
    throw Error(Errc::MagicMismatch, path + ": unsupported version " + std::to_string(version));
  }
  if (rows < 1 || cols < 2 || rows > (1ULL << 32) || cols > (1ULL << 32)) {
    throw Error(Errc::ParseError, path + ": implausible dimensions");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t bytes = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * sizeof(double);
  if (!in.read(reinterpret_cast<char*>(m.data()), std::streamsize(bytes))) {
    throw Error(Errc::Truncated, path + ": payload shorter than header promises");
  }
  return DataMatrix(std::move(m));
}

void save_matrix_bin(const std::string& path, const DataMatrix& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::ParseError, path + ": cannot open for writing");
  out.write("ASCM", 4);
  std::uint32_t version = 1;
  std::uint64_t rows = std::uint64_t(x.dim()), cols = std::uint64_t(x.count());
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  out.write(reinterpret_cast<const char*>(x.values.data()),
            std::streamsize(static_cast<std::size_t>(rows) * cols * sizeof(double)));
  if (!out) throw Error(Errc::ParseError, path + ": write failed");
}

DataMatrix load_matrix_auto(const std::string& path) {
  std::string e = ext_of(path);
  if (e == "bin") return load_matrix_bin(path);
  if (e == "csv") return load_matrix_csv(path);
  throw Error(Errc::UsageError, path + ": unknown matrix extension '" + e + "' (use .csv or .bin)");
}

void save_matrix_auto(const std::string& path, const DataMatrix& x) {
  std::string e = ext_of(path);
  if (e == "bin") return save_matrix_bin(path, x);
  if (e == "csv") return save_matrix_csv(path, x);
  throw Error(Errc::UsageError, path + ": unknown matrix extension '" + e + "' (use .csv or .bin)");
}

std::vector<int> load_labels(const std::string& path, int p) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, path + ": cannot open");
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    int v = 0;
    const char* b = line.c_str() + first;
    const char* e = line.c_str() + line.size();
    while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) {
      throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": bad label '" + line + "'");
    }
    if (v < -1 || (p >= 0 && v >= p)) {
      throw Error(Errc::OutOfRange, path + ":" + std::to_string(lineno) + ": label " +
                                        std::to_string(v) + " outside [-1," + std::to_string(p) + ")");
    }
    labels.push_back(v);
  }
  if (labels.empty()) throw Error(Errc::ParseError, path + ": no labels found");
  return labels;
}

void save_labels(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::ParseError, path + ": cannot open for writing");
  for (int v : labels) out << v << "\n";
  if (!out) throw Error(Errc::ParseError, path + ": write failed");
}

DataMatrix load_idx_images(const std::string& path, int* height, int* width) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, path + ": cannot open");
  std::uint32_t magic = read_u32_be(in, path);
  if (magic != 0x00000803u) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%08x", magic);
    throw Error(Errc::MagicMismatch, path + ": magic " + buf + ", expected 0x00000803");
  }
  std::uint32_t count = read_u32_be(in, path);
  std::uint32_t h = read_u32_be(in, path);
  std::uint32_t w = read_u32_be(in, path);
  if (count < 2 || h < 1 || w < 1 || h > 4096 || w > 4096) {
    throw Error(Errc::ParseError, path + ": implausible image dimensions");
  }
  std::size_t d = static_cast<std::size_t>(h) * w;
  std::vector<unsigned char> buf(d);
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(count));
  for (std::uint32_t j = 0; j < count; ++j) {
    if (!in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(d))) {
      throw Error(Errc::Truncated, path + ": image payload ends at image " + std::to_string(j));
    }
    for (std::size_t i = 0; i < d; ++i) m(Eigen::Index(i), j) = double(buf[i]) / 255.0;
  }
  if (height) *height = int(h);
  if (width) *width = int(w);
  return DataMatrix(std::move(m));
}

DataMatrix load_pgm_dir(const std::string& dir, int target_h, int target_w,
                        std::vector<std::string>* names) {
  namespace fs = std::filesystem;
  if (target_h < 1 || target_w < 1) throw Error(Errc::OutOfRange, "target size must be positive");
  if (!fs::is_directory(dir)) throw Error(Errc::ParseError, dir + ": not a directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (ext_of(entry.path().filename().string()) == "pgm") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.size() < 2) throw Error(Errc::ParseError, dir + ": fewer than two .pgm files");
  std::size_t d = static_cast<std::size_t>(target_h) * target_w;
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(files.size()));
  std::vector<double> img, resized;
  for (std::size_t j = 0; j < files.size(); ++j) {
    int h = 0, w = 0;
    img = load_pgm(files[j], &h, &w);
    resize_bilinear(img, h, w, resized, target_h, target_w);
    for (std::size_t i = 0; i < d; ++i) m(Eigen::Index(i), Eigen::Index(j)) = resized[i];
  }
  if (names) *names = std::move(files);
  return DataMatrix(std::move(m));
}

}  // namespace augsc
