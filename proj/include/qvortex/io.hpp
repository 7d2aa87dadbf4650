#pragma once

// Output plumbing for the command-line tool: CSV/PPM/JSON rendering,
// SHA-256 checksums, atomic writes and the run manifest.

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "qvortex/errors.hpp"

namespace qvortex::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "1.0.0";

/// 17 significant digits, shortest %g-style layout, '.' separator.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) {
    if (row.size() != header.size()) throw InvalidParams("csv: row width mismatch");
    rows.push_back(std::move(row));
  }

  std::string render() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_double(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  /// Column arrays keyed by header name.
  Json to_json() const {
    Json j = Json::object();
    for (std::size_t c = 0; c < header.size(); ++c) {
      Json col = Json::array();
      for (const auto& row : rows) col.push_back(row[c]);
      j[header[c]] = std::move(col);
    }
    return j;
  }
};

/// Binary P6 greyscale image of a row-major field. Row 0 of `values` is the
/// smallest y and is drawn at the bottom. Grey level from v/max with gamma
/// 0.5, light on white: 255 for zero, 159 at the maximum.
inline std::string render_ppm(std::span<const double> values, std::size_t width,
                              std::size_t height) {
  if (width == 0 || height == 0 || values.size() != width * height)
    throw InvalidParams("ppm: value count does not match image size");
  double top = 0.0;
  for (double v : values)
    if (std::isfinite(v)) top = std::max(top, std::abs(v));
  std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.reserve(out.size() + 3 * width * height);
  for (std::size_t r = height; r-- > 0;) {
    for (std::size_t c = 0; c < width; ++c) {
      const double v = values[r * width + c];
      const double x = (top > 0.0 && std::isfinite(v)) ? std::sqrt(std::abs(v) / top) : 0.0;
      const auto grey = static_cast<unsigned char>(255 - std::lround(96.0 * x));
      out.append(3, static_cast<char>(grey));
    }
  }
  return out;
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes to a sibling temporary then renames over the target.
inline void atomic_write(const std::filesystem::path& target, std::string_view data) {
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot rename onto " + target.string());
  }
}

struct OutputFile {
  std::string name;
  std::string content;
};

/// Files of one run plus the flat manifest that describes them.
class OutputSet {
 public:
  explicit OutputSet(std::string subcommand) {
    manifest_["schema_version"] = schema_version;
#ifdef QVORTEX_VERSION
    manifest_["tool_version"] = QVORTEX_VERSION;
#else
    manifest_["tool_version"] = "0.0.0";
#endif
    manifest_["subcommand"] = std::move(subcommand);
  }

  void add(std::string name, std::string content) {
    files_.push_back({std::move(name), std::move(content)});
  }

  /// Flat manifest entry; nested objects are not used.
  template <class T>
  void set(const std::string& key, T&& value) {
    manifest_[key] = std::forward<T>(value);
  }

  const std::vector<OutputFile>& files() const { return files_; }
  const Json& manifest() const { return manifest_; }

  /// Data files first, manifest last; every write is atomic.
  std::vector<std::filesystem::path> write(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
    Json list = Json::array();
    std::vector<std::filesystem::path> written;
    for (const auto& f : files_) {
      atomic_write(dir / f.name, f.content);
      written.push_back(dir / f.name);
      list.push_back({{"name", f.name},
                      {"sha256", sha256_hex(f.content)},
                      {"bytes", f.content.size()}});
    }
    manifest_["files"] = std::move(list);
    atomic_write(dir / "manifest.json", manifest_.dump(2) + "\n");
    written.push_back(dir / "manifest.json");
    return written;
  }

 private:
  Json manifest_ = Json::object();
  std::vector<OutputFile> files_;
};

}  // namespace qvortex::io
