#pragma once

// Named verification suites over the three spaces. Every check draws sample k
// from CounterRng::named(seed, check name, k), so a record depends only on the
// seed, its name and the sample count.

#include <cstdint>
#include <map>
#include <string>

#include "nkiso/oracle.hpp"
#include "nkiso/report.hpp"
#include "nkiso/serialize.hpp"

namespace nkiso {

enum class Suite { Invariants, Curvature, NkDefect, Decompose, FuzzGroup, All };

const char* to_string(Suite suite);
/// invariants | curvature | nk-defect | decompose | fuzz-group | all.
Suite parse_suite(const std::string& name);

struct RunConfig {
  std::string command = "verify";
  Space space = Space::S3S3;
  Suite suite = Suite::All;
  std::size_t samples = 100;
  std::uint64_t seed = 42;
  /// Overrides keyed by check name or by a dotted prefix of it ("flag.curvature");
  /// the longest matching key wins.
  std::map<std::string, double> tolerances;
  oracle::Step step;
};

/// Runs the selected suite. Throws InvalidArgument for a step outside
/// [1e-5, 1e-2] or a tolerance key that matches no check.
VerificationReport run(const RunConfig& config);

}  // namespace nkiso
