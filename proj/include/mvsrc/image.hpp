#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mvsrc/sample.hpp"

namespace mvsrc {

// 8-bit grayscale image, row-major.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

// Binary PGM (P5, maxval <= 255). Anything else is an ingestion error naming
// the path.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

// Bilinear resampling with pixel-center alignment
// (src = (dst + 0.5) * in / out - 0.5, clamped to the border). Returns
// intensities on the 0..255 scale, row-major, width * height long. Same-size
// input is copied through unchanged.
std::vector<double> resize_bilinear(const GrayImage& image, std::size_t width, std::size_t height);

// Resize to width x height, vectorize row-major, divide by 255.
std::vector<double> vectorize(const GrayImage& image, std::size_t width, std::size_t height);

struct ManifestEntry {
  std::string path;  // as written in the manifest
  std::string class_id;
  std::string view_id;
  Role role = Role::Train;
};

// UTF-8 CSV with header `path,class,view,role`; role is `train` or `test`.
// Relative paths resolve against the manifest's directory.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::size_t image_width = 40;
  std::size_t image_height = 20;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const ManifestEntry& e) const;
};

DatasetManifest load_manifest(const std::filesystem::path& path, std::size_t image_width = 40,
                              std::size_t image_height = 20);
std::vector<Sample> load_samples(const DatasetManifest& manifest);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

// Writes every sample as `<class>_<view>_<role>_<n>.pgm` under `dir` plus
// `dir/manifest.csv`. Values in [-1, 1] map to round(255 * (v + 1) / 2);
// each vector must have width * height entries.
DatasetManifest export_dataset(const std::filesystem::path& dir, const std::vector<Sample>& train,
                               const std::vector<Sample>& test, std::size_t width,
                               std::size_t height);

}  // namespace mvsrc
