#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "error.hpp"
#include "volume.hpp"

namespace skfb {

/// How samples outside [0, n) are synthesised.
///
///   Reflect        half-sample mirror:  d c b a | a b c d | d c b a
///   Clamp          repeat the edge:     a a a a | a b c d | d d d d
///   Periodic       wrap around:         a b c d | a b c d | a b c d
///   Antisymmetric  point mirror through the edge sample: v[-i] = 2 v[0] - v[i].
///                  Reproduces affine data across the edge, so operators keep their
///                  interior order of accuracy up to the boundary.
enum class Boundary { Reflect, Clamp, Periodic, Antisymmetric };

inline const char* to_string(Boundary b) {
  switch (b) {
    case Boundary::Reflect: return "reflect";
    case Boundary::Clamp: return "clamp";
    case Boundary::Periodic: return "periodic";
    case Boundary::Antisymmetric: return "antisymmetric";
  }
  return "";
}

inline Boundary parse_boundary(const std::string& s) {
  if (s == "reflect") return Boundary::Reflect;
  if (s == "clamp") return Boundary::Clamp;
  if (s == "periodic") return Boundary::Periodic;
  if (s == "antisymmetric") return Boundary::Antisymmetric;
  throw ConfigError("unknown boundary policy '" + s + "'");
}

namespace detail {

inline std::ptrdiff_t floor_mod(std::ptrdiff_t i, std::ptrdiff_t n) {
  const std::ptrdiff_t m = i % n;
  return m < 0 ? m + n : m;
}

/// Index into [0,n) for the index-remapping policies.
inline std::ptrdiff_t map_index(std::ptrdiff_t i, std::ptrdiff_t n, Boundary b) {
  if (i >= 0 && i < n) return i;
  switch (b) {
    case Boundary::Clamp: return i < 0 ? 0 : n - 1;
    case Boundary::Periodic: return floor_mod(i, n);
    case Boundary::Reflect:
    default: {
      const std::ptrdiff_t m = floor_mod(i, 2 * n);
      return m < n ? m : 2 * n - 1 - m;
    }
  }
}

/// Sample i of a strided line of length n, extended per `b`.
template <class Get>
double extended(const Get& get, std::ptrdiff_t i, std::ptrdiff_t n, Boundary b) {
  if (i >= 0 && i < n) return get(i);
  if (b != Boundary::Antisymmetric) return get(map_index(i, n, b));
  if (n == 1) return get(0);
  // Unfold repeated point reflections: value = sign * v[j] + offset.
  double sign = 1.0, offset = 0.0;
  while (i < 0 || i >= n) {
    if (i < 0) {
      offset += sign * 2.0 * get(0);
      sign = -sign;
      i = -i;
    } else {
      offset += sign * 2.0 * get(n - 1);
      sign = -sign;
      i = 2 * (n - 1) - i;
    }
  }
  return sign * get(i) + offset;
}

/// Value of `v` at a possibly out-of-range multi-index, extending one axis at a time.
inline double extended_at(const Volume& v, std::array<std::ptrdiff_t, 3> idx, Boundary b,
                          std::size_t axis = 0) {
  const std::size_t rank = v.rank();
  while (axis < rank && idx[axis] >= 0 && idx[axis] < static_cast<std::ptrdiff_t>(v.dim(axis)))
    ++axis;
  if (axis == rank) {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < rank; ++a) flat = flat * v.dim(a) + static_cast<std::size_t>(idx[a]);
    return v[flat];
  }
  const auto n = static_cast<std::ptrdiff_t>(v.dim(axis));
  auto get = [&](std::ptrdiff_t j) {
    auto sub = idx;
    sub[axis] = j;
    return extended_at(v, sub, b, axis + 1);
  };
  return extended(get, idx[axis], n, b);
}

}  // namespace detail
}  // namespace skfb
