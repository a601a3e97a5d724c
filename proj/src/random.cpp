#include "treefire/random.hpp"

namespace treefire {

namespace {
__extension__ using Wide = unsigned __int128;
}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection of the biased low range.
  Wide product =
      static_cast<Wide>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<Wide>(engine_()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Rng trial_stream(std::uint64_t master_seed, std::string_view kind,
                 std::uint64_t n, std::uint64_t trial) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ fnv1a(kind));
  h = splitmix64(h ^ n);
  h = splitmix64(h ^ trial);
  return Rng(h);
}

}  // namespace treefire
