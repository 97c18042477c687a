#include "mvsrc/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "mvsrc/error.hpp"

namespace mvsrc {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void ingest_fail(const fs::path& path, const std::string& what) {
  fail(ErrorCode::Ingestion, path.string() + ": " + what);
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string header_token(const std::string& buf, std::size_t& pos) {
  while (pos < buf.size()) {
    if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
      ++pos;
    } else if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos])) &&
         buf[pos] != '#') {
    ++pos;
  }
  return buf.substr(start, pos - start);
}

std::size_t header_number(const std::string& buf, std::size_t& pos, const fs::path& path,
                          const char* what) {
  const std::string tok = header_token(buf, pos);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(),
                                  [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
    ingest_fail(path, std::string("malformed PGM header (") + what + ")");
  }
  return std::stoul(tok);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

}  // namespace

GrayImage read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ingest_fail(path, "cannot open file");
  const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  const std::string magic = header_token(buf, pos);
  if (magic == "P6" || magic == "P3") ingest_fail(path, "color image, expected 8-bit grayscale");
  if (magic == "P2") ingest_fail(path, "ASCII graymap, expected binary (P5)");
  if (magic != "P5") ingest_fail(path, "not a binary PGM (P5) file");

  GrayImage img;
  img.width = header_number(buf, pos, path, "width");
  img.height = header_number(buf, pos, path, "height");
  const std::size_t maxval = header_number(buf, pos, path, "maxval");
  if (img.width == 0 || img.height == 0) ingest_fail(path, "empty image");
  if (maxval == 0 || maxval > 255) ingest_fail(path, "maxval " + std::to_string(maxval) + " is not 8-bit");
  if (pos >= buf.size() || !std::isspace(static_cast<unsigned char>(buf[pos]))) {
    ingest_fail(path, "malformed PGM header");
  }
  ++pos;
  const std::size_t n = img.width * img.height;
  if (buf.size() - pos < n) ingest_fail(path, "truncated pixel data");
  img.pixels.assign(buf.begin() + static_cast<std::ptrdiff_t>(pos),
                    buf.begin() + static_cast<std::ptrdiff_t>(pos + n));
  if (maxval != 255) {
    for (auto& p : img.pixels) {
      p = static_cast<std::uint8_t>(std::lround(255.0 * std::min<std::size_t>(p, maxval) /
                                                static_cast<double>(maxval)));
    }
  }
  return img;
}

void write_pgm(const fs::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ingest_fail(path, "cannot create file");
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) ingest_fail(path, "write failed");
}

std::vector<double> resize_bilinear(const GrayImage& image, std::size_t width, std::size_t height) {
  std::vector<double> out(width * height);
  if (image.width == width && image.height == height) {
    std::copy(image.pixels.begin(), image.pixels.end(), out.begin());
    return out;
  }
  const double sx = static_cast<double>(image.width) / static_cast<double>(width);
  const double sy = static_cast<double>(image.height) / static_cast<double>(height);
  auto clamp_coord = [](double v, std::size_t n) {
    return std::clamp(v, 0.0, static_cast<double>(n - 1));
  };
  for (std::size_t r = 0; r < height; ++r) {
    const double fy = clamp_coord((static_cast<double>(r) + 0.5) * sy - 0.5, image.height);
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, image.height - 1);
    const double ty = fy - static_cast<double>(y0);
    for (std::size_t c = 0; c < width; ++c) {
      const double fx = clamp_coord((static_cast<double>(c) + 0.5) * sx - 0.5, image.width);
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, image.width - 1);
      const double tx = fx - static_cast<double>(x0);
      const double top = (1.0 - tx) * image.at(y0, x0) + tx * image.at(y0, x1);
      const double bottom = (1.0 - tx) * image.at(y1, x0) + tx * image.at(y1, x1);
      out[r * width + c] = (1.0 - ty) * top + ty * bottom;
    }
  }
  return out;
}

std::vector<double> vectorize(const GrayImage& image, std::size_t width, std::size_t height) {
  std::vector<double> v = resize_bilinear(image, width, height);
  for (double& e : v) e /= 255.0;
  return v;
}

fs::path DatasetManifest::resolve(const ManifestEntry& e) const {
  const fs::path p(e.path);
  return p.is_absolute() ? p : base_dir / p;
}

DatasetManifest load_manifest(const fs::path& path, std::size_t image_width,
                              std::size_t image_height) {
  if (image_width == 0 || image_height == 0) {
    fail(ErrorCode::InvalidParameter, "image size must be positive");
  }
  std::ifstream in(path);
  if (!in) ingest_fail(path, "cannot open manifest");

  DatasetManifest m;
  m.image_width = image_width;
  m.image_height = image_height;
  m.base_dir = path.parent_path();

  std::string line;
  if (!std::getline(in, line)) ingest_fail(path, "empty manifest");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_csv_line(trim(line));
  if (header != std::vector<std::string>{"path", "class", "view", "role"}) {
    ingest_fail(path, "header must be 'path,class,view,role'");
  }

  std::set<std::string> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    const std::string where = "line " + std::to_string(lineno);
    if (f.size() != 4) ingest_fail(path, where + ": expected 4 fields");
    ManifestEntry e{trim(f[0]), trim(f[1]), trim(f[2]), Role::Train};
    const std::string role = trim(f[3]);
    if (role == "train") {
      e.role = Role::Train;
    } else if (role == "test") {
      e.role = Role::Test;
    } else {
      ingest_fail(path, where + ": role must be 'train' or 'test'");
    }
    if (e.path.empty() || e.class_id.empty() || e.view_id.empty()) {
      ingest_fail(path, where + ": empty field");
    }
    if (!seen.insert(e.path).second) ingest_fail(path, where + ": duplicate path '" + e.path + "'");
    m.entries.push_back(std::move(e));
  }

  std::set<std::pair<std::string, std::string>> trained;
  std::set<std::string> classes;
  std::set<std::string> views;
  for (const auto& e : m.entries) {
    classes.insert(e.class_id);
    views.insert(e.view_id);
    if (e.role == Role::Train) trained.insert({e.class_id, e.view_id});
  }
  for (const auto& c : classes) {
    for (const auto& v : views) {
      if (!trained.count({c, v})) {
        ingest_fail(path, "no train entry for class '" + c + "' view '" + v + "'");
      }
    }
  }
  return m;
}

std::vector<Sample> load_samples(const DatasetManifest& manifest) {
  std::vector<Sample> out;
  out.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) {
    const fs::path p = manifest.resolve(e);
    Sample s;
    s.class_id = e.class_id;
    s.view_id = e.view_id;
    s.role = e.role;
    s.source = p.string();
    s.values = vectorize(read_pgm(p), manifest.image_width, manifest.image_height);
    out.push_back(std::move(s));
  }
  return out;
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path);
  if (!out) ingest_fail(path, "cannot create manifest");
  out << "path,class,view,role\n";
  for (const auto& e : manifest.entries) {
    out << csv_field(e.path) << ',' << csv_field(e.class_id) << ',' << csv_field(e.view_id) << ','
        << (e.role == Role::Train ? "train" : "test") << '\n';
  }
  if (!out) ingest_fail(path, "write failed");
}

DatasetManifest export_dataset(const fs::path& dir, const std::vector<Sample>& train,
                               const std::vector<Sample>& test, std::size_t width,
                               std::size_t height) {
  fs::create_directories(dir);
  DatasetManifest m;
  m.image_width = width;
  m.image_height = height;
  m.base_dir = dir;
  std::size_t n = 0;
  auto emit = [&](const Sample& s) {
    if (s.values.size() != width * height) {
      fail(ErrorCode::Dimension, "sample length " + std::to_string(s.values.size()) +
                                     " does not match " + std::to_string(width) + "x" +
                                     std::to_string(height));
    }
    GrayImage img{width, height, std::vector<std::uint8_t>(width * height)};
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const double v = std::clamp(s.values[i], -1.0, 1.0);
      img.pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * (v + 1.0) / 2.0));
    }
    const std::string role = s.role == Role::Train ? "train" : "test";
    std::ostringstream name;
    name << s.class_id << '_' << s.view_id << '_' << role << '_' << n++ << ".pgm";
    write_pgm(dir / name.str(), img);
    m.entries.push_back({name.str(), s.class_id, s.view_id, s.role});
  };
  for (const auto& s : train) emit(s);
  for (const auto& s : test) emit(s);
  write_manifest(dir / "manifest.csv", m);
  return m;
}

}  // namespace mvsrc
