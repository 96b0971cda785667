#ifndef JENSEN_RANDOM_HPP
#define JENSEN_RANDOM_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <exception>
#include <memory>
#include <random>
#include <thread>
#include <vector>

#include "jensen/error.hpp"

namespace jensen {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t default_seed = 20240611;

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent generator for the stream addressed by (seed, a, b, c). Any
/// replicate can be regenerated without touching the others.
inline Rng make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ a);
  h = mix64(h ^ (b + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (c + 0x8cb92ba72f3d8dd7ULL));
  return Rng(h);
}

/// A sampler draws one strictly positive value per call from the generator
/// it is handed; it must keep no state between calls.
template <class S>
concept Sampler = requires(const S& s, Rng& rng) {
  { s(rng) } -> std::convertible_to<double>;
};

struct ConstantSampler {
  double value;
  double operator()(Rng&) const { return value; }
};

struct LognormalSampler {
  double mu;
  double sigma;
  double operator()(Rng& rng) const {
    std::normal_distribution<double> z(0.0, 1.0);
    return std::exp(mu + sigma * z(rng));
  }
};

struct GammaSampler {
  double shape;
  double scale;
  double operator()(Rng& rng) const {
    std::gamma_distribution<double> g(shape, scale);
    return g(rng);
  }
};

struct ExponentialSampler {
  double rate;
  double operator()(Rng& rng) const {
    std::exponential_distribution<double> e(rate);
    return e(rng);
  }
};

/// Uniform resampling from a fixed set of values (e.g. a sample file).
struct ResamplingSampler {
  std::shared_ptr<const std::vector<double>> values;
  double operator()(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, values->size() - 1);
    return (*values)[pick(rng)];
  }
};

/// c * X for the same underlying stream.
template <Sampler S>
struct ScaledSampler {
  double factor;
  S inner;
  double operator()(Rng& rng) const { return factor * inner(rng); }
};

/// Runs fn(i) for i in [0, count) over `threads` workers in contiguous
/// blocks. If any call throws, the exception from the lowest-numbered failing
/// block is rethrown, so error reporting does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t block = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t lo = t * block;
      const std::size_t hi = std::min(count, lo + block);
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace jensen

#endif  // JENSEN_RANDOM_HPP
