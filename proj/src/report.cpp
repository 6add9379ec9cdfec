#include "nkiso/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "nkiso/error.hpp"

namespace nkiso {

Check::Check(std::string name, std::string anchor, double tolerance) {
  record_.name = std::move(name);
  record_.anchor = std::move(anchor);
  record_.tolerance = tolerance;
}

void Check::observe(double defect) {
  if (std::isnan(defect)) defect = std::numeric_limits<double>::infinity();
  ++record_.samples;
  record_.defect = std::max(record_.defect, defect);
  if (keep_) record_.per_sample.push_back(defect);
}

void Check::note(const std::string& key, double value) {
  for (auto& [k, v] : record_.extra) {
    if (k == key) {
      v = std::max(v, value);
      return;
    }
  }
  record_.extra.emplace_back(key, value);
}

bool VerificationReport::pass() const {
  if (records.empty()) return false;
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass(); });
}

const CheckRecord* VerificationReport::find(const std::string& name) const {
  for (const CheckRecord& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

const char* status(const CheckRecord& r) {
  if (r.vacuous()) return "vacuous";
  return r.pass() ? "pass" : "fail";
}

std::string short_real(double v) {
  if (std::isnan(v) || std::isinf(v)) return format_real(v);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

std::string report_body(const VerificationReport& report) {
  std::ostringstream out;
  out << "format nkiso-report/1\n";
  for (const auto& [k, v] : report.config) out << "config." << k << ' ' << v << '\n';
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const CheckRecord& r = report.records[i];
    const std::string p = "check." + std::to_string(i) + '.';
    out << p << "name " << r.name << '\n';
    out << p << "anchor " << r.anchor << '\n';
    out << p << "samples " << r.samples << '\n';
    out << p << "defect " << format_real(r.defect) << '\n';
    out << p << "tolerance " << format_real(r.tolerance) << '\n';
    for (const auto& [k, v] : r.extra) out << p << k << ' ' << format_real(v) << '\n';
    if (!r.per_sample.empty()) {
      out << p << "per_sample";
      for (double d : r.per_sample) out << ' ' << format_real(d);
      out << '\n';
    }
    out << p << "status " << status(r) << '\n';
  }
  out << "checks " << report.records.size() << '\n';
  out << "overall " << (report.pass() ? "pass" : "fail") << '\n';
  return out.str();
}

std::string report_table(const VerificationReport& report) {
  std::size_t width = 5;
  for (const CheckRecord& r : report.records) width = std::max(width, r.name.size());
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-*s  %8s  %10s  %10s  %s\n", static_cast<int>(width), "check",
                "samples", "defect", "tolerance", "status");
  out << line;
  for (const CheckRecord& r : report.records) {
    std::snprintf(line, sizeof line, "%-*s  %8zu  %10s  %10s  %s\n", static_cast<int>(width),
                  r.name.c_str(), r.samples, short_real(r.defect).c_str(),
                  short_real(r.tolerance).c_str(), status(r));
    out << line;
  }
  std::size_t failed = 0;
  for (const CheckRecord& r : report.records) failed += !r.pass();
  std::snprintf(line, sizeof line, "%zu checks, %zu failed, %.2f s: %s\n", report.records.size(), failed,
                report.seconds, report.pass() ? "PASS" : "FAIL");
  out << line;
  return out.str();
}

CheckRecord compare_tensor(const std::string& name, const std::string& anchor,
                           const TensorSampler& closed, const TensorSampler& numeric,
                           std::size_t samples, double tolerance) {
  Check check(name, anchor, tolerance);
  check.keep_samples();
  double max_abs = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::vector<double> a = closed(s);
    const std::vector<double> b = numeric(s);
    if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "compare_tensor: valence mismatch");
    double dev = 0.0, mag = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dev = std::max(dev, std::abs(a[i] - b[i]));
      mag = std::max(mag, std::abs(a[i]));
    }
    max_abs = std::max(max_abs, dev);
    check.observe(mag > 0.0 ? dev / mag : dev);
  }
  check.note("max_abs", max_abs);
  return check.record();
}

}  // namespace nkiso
