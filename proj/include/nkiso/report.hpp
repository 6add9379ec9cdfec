#pragma once

// Verification records and their two renderings: a deterministic key-value
// body (one block per check) and a human table that also carries timing.

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace nkiso {

struct CheckRecord {
  std::string name;
  std::string anchor;
  std::size_t samples = 0;
  double defect = 0.0;
  double tolerance = 0.0;
  /// Auxiliary max-reduced quantities, e.g. max_abs next to a relative defect.
  std::vector<std::pair<std::string, double>> extra;
  std::vector<double> per_sample;

  bool vacuous() const { return samples == 0; }
  /// NaN defects never pass.
  bool pass() const { return samples > 0 && defect <= tolerance; }
};

/// Max-reduction of per-sample defects into a record.
class Check {
 public:
  Check(std::string name, std::string anchor, double tolerance);

  /// NaN counts as an infinite defect.
  void observe(double defect);
  void note(const std::string& key, double value);
  /// Keeps the per-sample defects in the record.
  void keep_samples() { keep_ = true; }
  const CheckRecord& record() const { return record_; }

 private:
  CheckRecord record_;
  bool keep_ = false;
};

struct VerificationReport {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<CheckRecord> records;
  double seconds = 0.0;

  /// True iff there is at least one record and every record passes.
  bool pass() const;
  const CheckRecord* find(const std::string& name) const;
};

/// %.17g, with inf/nan spelled out.
std::string format_real(double v);

/// Deterministic machine-readable document; timing is excluded.
std::string report_body(const VerificationReport& report);
/// Fixed-width table with a timing footer.
std::string report_table(const VerificationReport& report);

using TensorSampler = std::function<std::vector<double>(std::size_t sample)>;

/// Componentwise comparison of two tensor samplers. The defect is the largest
/// per-sample relative deviation max|a - b| / max|a| (absolute when a = 0);
/// max_abs is recorded alongside, with the per-sample breakdown.
CheckRecord compare_tensor(const std::string& name, const std::string& anchor,
                           const TensorSampler& closed, const TensorSampler& numeric,
                           std::size_t samples, double tolerance);

}  // namespace nkiso
