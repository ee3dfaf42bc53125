#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace hawklab {

// Error taxonomy.  std::domain_error / std::range_error are used directly for
// argument-domain and overflow conditions; the types below name the failure
// modes specific to this library.
struct config_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct parse_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct dimension_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct resolution_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct precondition_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct integration_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct solve_error : std::runtime_error { using std::runtime_error::runtime_error; };
// A closed-form cross-check disagreed with a computed value; the message names
// the offending configuration.  Thrown only by *_check routines.
struct check_error : std::runtime_error { using std::runtime_error::runtime_error; };

// Hawking-mass normalization: compare 16*pi against the integral of H^2 (flat
// background) or of H^2 - 4 (hyperbolic background).
enum class MassMode { flat, hyperbolic };

// ---------------------------------------------------------------------------
// Deterministic counter-based RNG.  Every random draw in the library is a pure
// function of (seed, stream, counter), so identical configs give identical
// runs regardless of call order or platform.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(seed ^ mix64(stream * 0x9e3779b97f4a7c15ull))), ctr_(0) {}

  std::uint64_t next_u64() { return mix64(key_ ^ (0xd1b54a32d192ed03ull * ++ctr_)); }

  // Uniform in [0,1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [-1,1).
  double next_symmetric() { return 2.0 * next_double() - 1.0; }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_;
};

// ---------------------------------------------------------------------------
// 17 significant digits round-trips any double exactly; used for every number
// the tools write so that repeated runs are byte-identical.

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

inline std::string fmt17(long long x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld", x);
  return std::string(buf);
}

}  // namespace hawklab
