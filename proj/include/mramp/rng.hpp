#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace mramp {

// Purpose tags keep matrix, signal, noise and probe draws on disjoint streams.
enum class Purpose : std::uint64_t {
  matrix = 1,
  signal = 2,
  noise = 3,
  probe = 4,
  support = 5,
  cell = 6,
  test = 7,
};

std::uint64_t mix64(std::uint64_t x) noexcept;

// Combine a seed with any number of integer coordinates into a stream key.
std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) noexcept;

// Counter-based generator: draw i of a stream is mix64(key + i * golden).
// Any sub-stream can be addressed without touching others, so parallel
// fills are reproducible regardless of thread count.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}
  CounterRng(std::uint64_t seed, Purpose purpose, std::initializer_list<std::uint64_t> coords = {}) noexcept;

  std::uint64_t next_u64() noexcept;
  // Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mramp
