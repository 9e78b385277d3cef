#pragma once

#include <cstdint>
#include <string>

namespace tpctf {

struct VerifyOutcome {
  bool passed = false;
  std::string text;
};

// Identity deviations of the TP-CTF6, spline and DCT banks on a few grids.
VerifyOutcome verify_banks();
// Roundtrip and energy checks on `count` random images.
VerifyOutcome verify_transforms(std::uint64_t seed, int count);
// Grouping inequalities on `count` random balanced problems, one line per instance.
VerifyOutcome verify_grouping_instances(std::uint64_t seed, int count);

}  // namespace tpctf
