#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>

namespace infotrace {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Feature rows are accessed row-at-a-time throughout; keep them contiguous.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid inputs / configuration (CLI exit code 2).
struct InvalidInput : Error {
  using Error::Error;
};
struct DimensionMismatch : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct BadMagic : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct NonFiniteValue : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct UnknownId : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct EmptyPool : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct EmptyTruth : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct EmptyInput : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct DegenerateQueries : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct ZeroVectorRow : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct ZeroPriorVariance : InvalidInput {
  using InvalidInput::InvalidInput;
};
struct IoError : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Numerical failures (CLI exit code 3).
struct NumericalError : Error {
  using Error::Error;
};
struct NotPositiveDefinite : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateDenominator : NumericalError {
  using NumericalError::NumericalError;
};
struct NegativeVariance : NumericalError {
  using NumericalError::NumericalError;
};
struct ZeroVariance : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateReference : NumericalError {
  using NumericalError::NumericalError;
};

// FNV-1a, used for set hashes and config fingerprints.
inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a_u64(std::uint64_t v, std::uint64_t h = kFnvOffset) {
  return fnv1a(&v, sizeof(v), h);
}

inline std::uint64_t fnv1a_f64(double v, std::uint64_t h = kFnvOffset) {
  return fnv1a(&v, sizeof(v), h);
}

inline std::uint64_t fnv1a_str(const std::string& s, std::uint64_t h = kFnvOffset) {
  return fnv1a(s.data(), s.size(), h);
}

// Shortest round-trippable decimal form; keeps output files byte-stable.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::string format_hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

// Worker count for parallel candidate scoring. INFOTRACE_THREADS overrides;
// results never depend on it (parallel map to arrays, serial reduce).
int thread_count();

// Runs fn(begin, end) over a contiguous partition of [0, n).
void parallel_for(Index n, const std::function<void(Index, Index)>& fn);

}  // namespace infotrace
