#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace trustmtt {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

using Rng = std::mt19937_64;

// splitmix64 step, used to derive independent substream seeds from a root seed.
inline std::uint64_t mix_seed(std::uint64_t state) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t root, std::uint64_t index) {
  return mix_seed(root ^ mix_seed(index));
}

}  // namespace trustmtt
