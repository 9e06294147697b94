#include "hocean/frame_io.h"

#include <bit>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "hocean/error.h"

namespace hocean {

std::string frame_basename(long frame) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06ld", frame);
  return buf;
}

std::vector<unsigned char> encode_float32_le(const std::vector<double>& values) {
  std::vector<unsigned char> out(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(values[i]));
    out[4 * i + 0] = static_cast<unsigned char>(bits & 0xffu);
    out[4 * i + 1] = static_cast<unsigned char>((bits >> 8) & 0xffu);
    out[4 * i + 2] = static_cast<unsigned char>((bits >> 16) & 0xffu);
    out[4 * i + 3] = static_cast<unsigned char>((bits >> 24) & 0xffu);
  }
  return out;
}

std::vector<float> decode_float32_le(const unsigned char* data, std::size_t size) {
  if (size % 4 != 0) throw IoError("float32 payload size is not a multiple of 4");
  std::vector<float> out(size / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t bits = static_cast<std::uint32_t>(data[4 * i]) |
                               (static_cast<std::uint32_t>(data[4 * i + 1]) << 8) |
                               (static_cast<std::uint32_t>(data[4 * i + 2]) << 16) |
                               (static_cast<std::uint32_t>(data[4 * i + 3]) << 24);
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_frame(const std::string& dir, long frame, const HeightField& field, double t) {
  const std::string base = dir + "/" + frame_basename(frame);
  const auto bytes = encode_float32_le(field.height);
  {
    std::ofstream out(base + ".raw", std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + base + ".raw' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + base + ".raw'");
  }
  std::ostringstream meta;
  meta << field.nx << ' ' << field.ny << ' ' << format_number(field.spacing) << ' ' << format_number(field.origin.x)
       << ' ' << format_number(field.origin.y) << ' ' << format_number(t) << '\n';
  write_text_file(base + ".meta", meta.str());
}

std::vector<float> read_frame_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_float32_le(bytes.data(), bytes.size());
}

FrameMeta read_frame_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  FrameMeta m;
  if (!(in >> m.nx >> m.ny >> m.spacing >> m.origin.x >> m.origin.y >> m.t)) {
    throw IoError("malformed frame sidecar '" + path + "'");
  }
  return m;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : columns_(header.size()), path_(path) {
  file_ = std::fopen(path.c_str(), "wb");
  if (file_ == nullptr) throw IoError("cannot open '" + path + "' for writing");
  row(header);
}

CsvWriter::~CsvWriter() {
  if (file_ != nullptr) std::fclose(file_);
}

CsvWriter::CsvWriter(CsvWriter&& other) noexcept
    : file_(std::exchange(other.file_, nullptr)), columns_(other.columns_), path_(std::move(other.path_)) {}

CsvWriter& CsvWriter::operator=(CsvWriter&& other) noexcept {
  if (this != &other) {
    if (file_ != nullptr) std::fclose(file_);
    file_ = std::exchange(other.file_, nullptr);
    columns_ = other.columns_;
    path_ = std::move(other.path_);
  }
  return *this;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (file_ == nullptr) throw IoError("CSV writer is closed");
  if (cells.size() != columns_) throw IoError("CSV row width does not match the header of '" + path_ + "'");
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i != 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size()) throw IoError("write failed for '" + path_ + "'");
}

void CsvWriter::flush() {
  if (file_ != nullptr) std::fflush(file_);
}

}  // namespace hocean
