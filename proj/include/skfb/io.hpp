#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "volume.hpp"

namespace skfb {

class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {
inline std::uint64_t to_little_endian(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) return x;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((x >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}
}  // namespace detail

/// VOL1 header line (without the trailing newline).
inline std::string vol1_header(const Volume& v) {
  nlohmann::ordered_json h;
  h["magic"] = "VOL1";
  h["dims"] = v.dims();
  h["dtype"] = "f64le";
  h["order"] = "row-major";
  h["grid"] = to_string(v.grid());
  return h.dump();
}

/// One JSON header line, '\n', then the samples as little-endian IEEE doubles.
inline void write_vol1(std::ostream& os, const Volume& v) {
  os << vol1_header(v) << '\n';
  for (double x : v.data()) {
    const std::uint64_t bits = detail::to_little_endian(std::bit_cast<std::uint64_t>(x));
    char buf[8];
    std::memcpy(buf, &bits, 8);
    os.write(buf, 8);
  }
  if (!os) throw IoError("write_vol1: stream failure");
}

inline Volume read_vol1(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("read_vol1: missing header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("read_vol1: bad header: ") + e.what());
  }
  if (h.value("magic", "") != "VOL1") throw IoError("read_vol1: bad magic");
  if (h.value("dtype", "") != "f64le") throw IoError("read_vol1: unsupported dtype");
  if (h.value("order", "") != "row-major") throw IoError("read_vol1: unsupported order");
  const std::string grid = h.value("grid", "node");
  if (grid != "node" && grid != "cell") throw IoError("read_vol1: bad grid kind");
  std::vector<std::size_t> dims;
  try {
    dims = h.at("dims").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception&) {
    throw IoError("read_vol1: bad dims");
  }
  if (dims.empty() || dims.size() > 3) throw IoError("read_vol1: rank must be 1..3");
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  std::vector<double> data(n);
  for (auto& x : data) {
    char buf[8];
    if (!is.read(buf, 8)) throw IoError("read_vol1: truncated payload");
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    x = std::bit_cast<double>(detail::to_little_endian(bits));
  }
  if (is.peek() != std::char_traits<char>::eof()) throw IoError("read_vol1: trailing bytes");
  return Volume(std::move(dims), std::move(data),
                grid == "cell" ? GridKind::CellCentered : GridKind::NodeCentered);
}

inline void save_vol1(const std::string& path, const Volume& v) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_vol1(os, v);
}

inline Volume load_vol1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_vol1(is);
}

enum class GrayScaling { MinMax, UnitRange };

/// 8-bit gray level of x already mapped to [0,1]: round half up of 255 x.
inline std::uint8_t gray_level(double unit) {
  const double c = std::clamp(unit, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

/// Binary PGM (P5). MinMax maps [min,max] linearly onto 0..255 (a flat image maps to 0);
/// UnitRange maps [0,1] and clamps.
inline void write_pgm(std::ostream& os, const Volume& img, GrayScaling scaling = GrayScaling::MinMax) {
  if (img.rank() != 2) throw DimensionError("write_pgm: expects a 2-D slice");
  double lo = 0.0, hi = 1.0;
  if (scaling == GrayScaling::MinMax) {
    const auto [mn, mx] = std::minmax_element(img.data().begin(), img.data().end());
    lo = *mn;
    hi = *mx;
  }
  const double range = hi - lo;
  os << "P5\n" << img.dim(1) << ' ' << img.dim(0) << "\n255\n";
  std::string payload(img.size(), '\0');
  for (std::size_t i = 0; i < img.size(); ++i)
    payload[i] = static_cast<char>(range > 0.0 ? gray_level((img[i] - lo) / range) : 0);
  os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!os) throw IoError("write_pgm: stream failure");
}

inline void export_slice_pgm(const Volume& img, const std::string& path,
                             GrayScaling scaling = GrayScaling::MinMax) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_pgm(os, img, scaling);
}

}  // namespace skfb
