#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace zog {

// Independent seed streams. Every random quantity in a run is derived from
// (base seed, stream, index...) so results never depend on evaluation order.
enum class Stream : std::uint64_t {
  kPerturbation = 1,
  kGame = 2,
  kGameBaseline = 3,
  kInit = 4,
  kTrain = 5,
  kEval = 6,
  kTrial = 7,
  kBestResponse = 8,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream) {
  return splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(stream)));
}

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream, std::uint64_t index) {
  return splitmix64(derive_seed(base, stream) + splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream, std::uint64_t index,
                                 std::uint64_t sub) {
  return splitmix64(derive_seed(base, stream, index) ^ splitmix64(~sub));
}

using Engine = std::mt19937_64;

inline void fill_standard_normal(Engine& engine, std::span<double> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : out) v = normal(engine);
}

inline double uniform01(Engine& engine) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine);
}

}  // namespace zog
