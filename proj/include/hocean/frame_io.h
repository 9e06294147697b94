#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "hocean/height_field.h"

namespace hocean {

/// Frame metadata as written to the `.meta` sidecar.
struct FrameMeta {
  int nx = 0;
  int ny = 0;
  double spacing = 0.0;
  Vec2 origin;
  double t = 0.0;
  long frame = 0;
};

std::string frame_basename(long frame);  ///< frame_%06d

/// Writes `<dir>/frame_%06d.raw` (little-endian float32, row-major) and its
/// `.meta` line "nx ny spacing origin_x origin_y t". Throws IoError.
void write_frame(const std::string& dir, long frame, const HeightField& field, double t);

std::vector<float> read_frame_raw(const std::string& path);
FrameMeta read_frame_meta(const std::string& path);

/// Heights as little-endian float32 bytes.
std::vector<unsigned char> encode_float32_le(const std::vector<double>& values);
std::vector<float> decode_float32_le(const unsigned char* data, std::size_t size);

void ensure_directory(const std::string& dir);
void write_text_file(const std::string& path, const std::string& text);

/// Append-only CSV with a fixed header.
class CsvWriter {
 public:
  CsvWriter() = default;
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  CsvWriter(CsvWriter&& other) noexcept;
  CsvWriter& operator=(CsvWriter&& other) noexcept;

  void row(const std::vector<std::string>& cells);
  bool is_open() const { return file_ != nullptr; }
  void flush();

 private:
  std::FILE* file_ = nullptr;
  std::size_t columns_ = 0;
  std::string path_;
};

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

}  // namespace hocean
