#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace auctionlearn::cli {

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  // Negative controls: each breaks one property on purpose.
  bool fault_revelation = false;  // r[k] pushed below w[k]
  bool fault_vcg_sign = false;    // literal VCG sign
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Runs the oracle-equivalence, unbiasedness, variance and payment suites.
std::vector<PropertyResult> run_verify(const VerifyOptions& options);

}  // namespace auctionlearn::cli
