// nkiso: verification suites and isometry decomposition from the command line.
//
// Exit status: 0 when every check passes, 1 on a failed check or a failed
// decomposition, 2 on usage, parse or configuration errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nkiso/error.hpp"
#include "nkiso/report.hpp"
#include "nkiso/rng.hpp"
#include "nkiso/serialize.hpp"
#include "nkiso/suites.hpp"

namespace {

using namespace nkiso;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
  std::string space = "s3s3";
  std::string suite = "all";
  std::size_t samples = 100;
  std::uint64_t seed = 42;
  std::vector<std::string> tol;
  double step = 1e-3;
  std::string out;
  std::string file;
};

RunConfig make_config(const Options& o, const std::string& command, Suite suite) {
  RunConfig c;
  c.command = command;
  c.space = parse_space(o.space);
  c.suite = suite;
  c.samples = o.samples;
  c.seed = o.seed;
  c.step.h = o.step;
  for (const std::string& kv : o.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::InvalidArgument, "--tol expects KEY=VAL, got '" + kv + "'");
    }
    const std::string value = kv.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !(v >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "--tol value '" + value + "' is not a non-negative real");
    }
    c.tolerances[kv.substr(0, eq)] = v;
  }
  return c;
}

void emit(const std::string& out, const std::string& body) {
  if (out.empty()) {
    std::cout << '\n' << body;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + out + "'");
  f << body;
}

int run_suite(const Options& o, const std::string& command, Suite suite) {
  const VerificationReport report = run(make_config(o, command, suite));
  std::cout << report_table(report);
  emit(o.out, report_body(report));
  return report.pass() ? kPass : kFail;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

constexpr int kProbePoints = 8;

// Largest deviation between two isometries on seeded points and tangents.
double pointwise_defect(const s3s3::Isometry& f, const s3s3::Isometry& g) {
  CounterRng rng(0x5eed, 1);
  double d = 0.0;
  for (int i = 0; i < kProbePoints; ++i) {
    const s3s3::Point p = s3s3::random_point(rng);
    const s3s3::Tangent x = s3s3::random_tangent(p, rng);
    d = std::max({d, s3s3::point_distance(s3s3::iso_apply(f, p), s3s3::iso_apply(g, p)),
                  (s3s3::coords(s3s3::iso_differential(f, x)) - s3s3::coords(s3s3::iso_differential(g, x)))
                      .cwiseAbs()
                      .maxCoeff()});
  }
  return d;
}

double pointwise_defect(const flag::Isometry& f, const flag::Isometry& g) {
  CounterRng rng(0x5eed, 1);
  double d = 0.0;
  for (int i = 0; i < kProbePoints; ++i) {
    const flag::Point p = flag::random_point(rng);
    const flag::Tangent x = flag::random_tangent(p, rng);
    d = std::max({d, flag::point_distance(flag::iso_apply_flag(f, p), flag::iso_apply_flag(g, p)),
                  (flag::iso_differential_flag(f, x).coeffs - flag::iso_differential_flag(g, x).coeffs)
                      .cwiseAbs()
                      .maxCoeff()});
  }
  return d;
}

double pointwise_defect(const cp3::Isometry& f, const cp3::Isometry& g) {
  CounterRng rng(0x5eed, 1);
  double d = 0.0;
  for (int i = 0; i < kProbePoints; ++i) {
    const cp3::Point p = cp3::random_point(rng);
    const cp3::Tangent x = cp3::random_tangent(p, rng);
    d = std::max({d, cp3::point_distance(cp3::iso_apply_cp3(f, p), cp3::iso_apply_cp3(g, p)),
                  (cp3::iso_differential_cp3(f, x).horiz - cp3::iso_differential_cp3(g, x).horiz)
                      .cwiseAbs()
                      .maxCoeff()});
  }
  return d;
}

int decompose(const Options& o) {
  const Space space = parse_space(o.space);
  const AnyIsometry parsed = parse_composition(space, read_file(o.file));
  AnyIsometry result;
  double defect = 0.0;
  try {
    if (const auto* f = std::get_if<s3s3::Isometry>(&parsed)) {
      const s3s3::Isometry g = s3s3::decompose_isometry(s3s3::make_oracle(*f)).canonical();
      defect = pointwise_defect(*f, g);
      result = g;
    } else if (const auto* f = std::get_if<flag::Isometry>(&parsed)) {
      const flag::Isometry g = flag::decompose_flag_isometry(flag::make_oracle(*f)).canonical();
      defect = pointwise_defect(*f, g);
      result = g;
    } else {
      // No black-box decomposition on CP3: the composed matrix is run back
      // through the descent test instead.
      const auto& e = std::get<cp3::Isometry>(parsed);
      const auto g = cp3::descends_to_nk_isometry(e.a);
      if (!g) {
        std::cerr << "nkiso: composed matrix does not descend to an isometry\n";
        return kFail;
      }
      const cp3::Isometry h = cp3::Isometry{g->a, e.k}.canonical();
      defect = pointwise_defect(e, h);
      result = h;
    }
  } catch (const Error& e) {
    std::cerr << "nkiso: decomposition failed (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kFail;
  }
  std::ostringstream body;
  body << format_element(result) << '\n' << "defect " << format_real(defect) << '\n';
  if (o.out.empty()) {
    std::cout << body.str();
  } else {
    emit(o.out, body.str());
  }
  return defect <= 1e-8 ? kPass : kFail;
}

void add_common(CLI::App* cmd, Options& o, bool with_suite) {
  cmd->add_option("--space", o.space, "s3s3 | cp3 | flag")
      ->check(CLI::IsMember({"s3s3", "cp3", "flag"}));
  if (with_suite) {
    cmd->add_option("--suite", o.suite, "invariants | curvature | nk-defect | decompose | fuzz-group | all")
        ->check(CLI::IsMember({"invariants", "curvature", "nk-defect", "decompose", "fuzz-group", "all"}));
  }
  cmd->add_option("--samples", o.samples, "samples per check (0 gives vacuous records)");
  cmd->add_option("--seed", o.seed, "64-bit seed");
  cmd->add_option("--tol", o.tol, "tolerance override KEY=VAL, KEY a check name or dotted prefix")
      ->allow_extra_args(false);
  cmd->add_option("--step", o.step, "finite-difference step in [1e-5, 1e-2]");
  cmd->add_option("--out", o.out, "write the report body here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nearly Kaehler S3xS3, CP3 and flag manifold: verification and isometry decomposition"};
  app.require_subcommand(1);
  Options o;

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, o, true);
  CLI::App* curvature = app.add_subcommand("curvature-report", "closed-form curvature against the oracle");
  add_common(curvature, o, false);
  CLI::App* fuzz = app.add_subcommand("fuzz-group", "group-law fuzzing");
  add_common(fuzz, o, false);
  CLI::App* decomp = app.add_subcommand("decompose", "decompose a serialized element or composition");
  decomp->add_option("file", o.file, "element record or generator composition")->required();
  decomp->add_option("--space", o.space, "s3s3 | cp3 | flag")->check(CLI::IsMember({"s3s3", "cp3", "flag"}));
  decomp->add_option("--out", o.out, "write the result here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*verify) return run_suite(o, "verify", parse_suite(o.suite));
    if (*curvature) return run_suite(o, "curvature-report", Suite::Curvature);
    if (*fuzz) return run_suite(o, "fuzz-group", Suite::FuzzGroup);
    return decompose(o);
  } catch (const Error& e) {
    std::cerr << "nkiso: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return kUsage;
  }
}
