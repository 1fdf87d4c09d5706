#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpdo/errors.hpp"
#include "lpdo/io.hpp"

namespace lpdo {

class UnknownSuite : public Error {
 public:
  using Error::Error;
};

struct VerifyConfig {
  std::uint64_t seed = 42;
  /// Windows for the index computations; the largest should be >= 32.
  std::vector<int> index_windows{16, 32};
};

const std::vector<std::string>& suite_names();

/// Runs one suite ("lattice-core", "symbol-model", "quantize", "sobolev",
/// "elliptic", "fredholm") or "all". Each property records observed value,
/// tolerance, and verdict.
Json run_verify(const std::string& suite, const VerifyConfig& config = {});

}  // namespace lpdo
