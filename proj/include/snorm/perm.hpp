// Copyright 2026 The snorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace snorm {

/// A permutation of the four vertices {0,1,2,3} of a tetrahedron.
class Perm4 {
 public:
  constexpr Perm4() : image_{0, 1, 2, 3} {}
  constexpr Perm4(int a, int b, int c, int d)
      : image_{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
               static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)} {
    if (!valid()) throw std::invalid_argument("Perm4: not a permutation");
  }

  constexpr int operator[](int v) const { return image_[v]; }

  constexpr Perm4 inverse() const {
    Perm4 out;
    for (int i = 0; i < 4; ++i) out.image_[image_[i]] = static_cast<std::uint8_t>(i);
    return out;
  }

  /// (*this * other)[v] == (*this)[other[v]]
  constexpr Perm4 operator*(const Perm4& other) const {
    Perm4 out;
    for (int i = 0; i < 4; ++i) out.image_[i] = image_[other.image_[i]];
    return out;
  }

  constexpr bool operator==(const Perm4&) const = default;

  std::string str() const {
    std::string s(4, '0');
    for (int i = 0; i < 4; ++i) s[i] = static_cast<char>('0' + image_[i]);
    return s;
  }

 private:
  constexpr bool valid() const {
    int seen = 0;
    for (auto v : image_) {
      if (v > 3) return false;
      seen |= 1 << v;
    }
    return seen == 0xF;
  }

  std::array<std::uint8_t, 4> image_;
};

// Edges of a tetrahedron are numbered 0..5 in lexicographic order of their
// endpoints: 01 02 03 12 13 23.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int edge_index(int a, int b) {
  if (a > b) {
    int t = a;
    a = b;
    b = t;
  }
  if (a == 0) return b - 1;
  if (a == 1) return b + 1;
  return 5;
}

/// Vertices of face `f` (the face opposite vertex f) in ascending order.
constexpr std::array<int, 3> face_vertices(int f) {
  std::array<int, 3> out{};
  int k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != f) out[k++] = v;
  return out;
}

/// The two vertices of the tetrahedron not in {a, b}, ascending.
constexpr std::array<int, 2> complement(int a, int b) {
  std::array<int, 2> out{};
  int k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != a && v != b) out[k++] = v;
  return out;
}

}  // namespace snorm
