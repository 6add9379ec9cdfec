#include "nkiso/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <set>

#include "nkiso/cp3.hpp"
#include "nkiso/error.hpp"
#include "nkiso/flag.hpp"
#include "nkiso/s3s3.hpp"

namespace nkiso {

const char* to_string(Suite suite) {
  switch (suite) {
    case Suite::Invariants: return "invariants";
    case Suite::Curvature: return "curvature";
    case Suite::NkDefect: return "nk-defect";
    case Suite::Decompose: return "decompose";
    case Suite::FuzzGroup: return "fuzz-group";
    case Suite::All: return "all";
  }
  return "unknown";
}

Suite parse_suite(const std::string& name) {
  for (Suite s : {Suite::Invariants, Suite::Curvature, Suite::NkDefect, Suite::Decompose,
                  Suite::FuzzGroup, Suite::All}) {
    if (name == to_string(s)) return s;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown suite '" + name + "'");
}

namespace {

using oracle::MatrixField;
using oracle::Tensor3;
using oracle::Tensor4;
using oracle::Vec;

constexpr double kInf = std::numeric_limits<double>::infinity();

double vmax(const Vec6& v) { return v.cwiseAbs().maxCoeff(); }
double vmax(const Vec4c& v) { return v.cwiseAbs().maxCoeff(); }

class Runner {
 public:
  explicit Runner(const RunConfig& config) : config_(config) {}

  const RunConfig& config() const { return config_; }
  std::size_t samples() const { return config_.samples; }
  oracle::Step step() const { return config_.step; }

  double tolerance(const std::string& name, double fallback) {
    std::size_t best = 0;
    double value = fallback;
    for (const auto& [key, v] : config_.tolerances) {
      const bool match = name == key || (name.size() > key.size() && name.compare(0, key.size(), key) == 0 &&
                                         name[key.size()] == '.');
      if (match) {
        used_.insert(key);
        if (key.size() >= best) best = key.size(), value = v;
      }
    }
    return value;
  }

  /// Runs `sample` once per sample index with that sample's stream. Library
  /// errors count as infinite defects.
  void check(const std::string& name, const std::string& anchor, double tol,
             const std::function<double(CounterRng&, Check&)>& sample, std::size_t count) {
    Check c(name, anchor, tolerance(name, tol));
    std::size_t errors = 0;
    for (std::size_t k = 0; k < count; ++k) {
      CounterRng rng = CounterRng::named(config_.seed, name, k);
      try {
        c.observe(sample(rng, c));
      } catch (const Error&) {
        ++errors;
        c.observe(kInf);
      }
    }
    if (errors) c.note("errors", static_cast<double>(errors));
    records_.push_back(c.record());
  }

  void check(const std::string& name, const std::string& anchor, double tol,
             const std::function<double(CounterRng&)>& sample) {
    check(name, anchor, tol, [&](CounterRng& rng, Check&) { return sample(rng); }, samples());
  }

  void check(const std::string& name, const std::string& anchor, double tol,
             const std::function<double(CounterRng&, Check&)>& sample) {
    check(name, anchor, tol, sample, samples());
  }

  /// Deterministic single evaluation (vacuous when samples is 0).
  void fixed(const std::string& name, const std::string& anchor, double tol,
             const std::function<double()>& value) {
    check(name, anchor, tol, [&](CounterRng&, Check&) { return value(); }, samples() > 0 ? 1 : 0);
  }

  void add(CheckRecord r) {
    r.tolerance = tolerance(r.name, r.tolerance);
    records_.push_back(std::move(r));
  }

  std::vector<CheckRecord> take() { return std::move(records_); }

  void require_keys_used() const {
    for (const auto& [key, v] : config_.tolerances) {
      if (!used_.count(key)) throw Error(ErrorKind::InvalidArgument, "tolerance key '" + key + "' matches no check");
    }
  }

 private:
  const RunConfig& config_;
  std::vector<CheckRecord> records_;
  std::set<std::string> used_;
};

std::vector<double> flatten(const Tensor4& t) { return t.data(); }

// Symmetrized defect of nabla J; the size of nabla J itself is kept as an
// extra so a vanishing derivative cannot pass unnoticed.
double nk_defect(const Tensor3& n, Check& c) {
  c.note("nabla_j_max", n.max_abs());
  return oracle::symmetrized_defect(n);
}

template <class Tangent, class Metric, class Curvature>
std::vector<double> closed_lowered(const std::vector<Tangent>& e, Metric metric, Curvature curvature) {
  std::vector<double> out;
  out.reserve(1296);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) {
        const Tangent r = curvature(e[i], e[j], e[k]);
        for (int l = 0; l < 6; ++l) out.push_back(metric(r, e[l]));
      }
  return out;
}

/// max |R_ijkl + R_jikl|, |R_ijkl + R_ijlk|, |R_ijkl - R_klij|, first Bianchi.
double riemann_symmetry_defect(const std::function<double(int, int, int, int)>& r) {
  double d = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l) {
          const double v = r(i, j, k, l);
          d = std::max({d, std::abs(v + r(j, i, k, l)), std::abs(v + r(i, j, l, k)),
                        std::abs(v - r(k, l, i, j)), std::abs(v + r(j, k, i, l) + r(k, i, j, l))});
        }
  return d;
}

// ---------------------------------------------------------------- S3 x S3

namespace s3 = s3s3;

const char* kTauSuffix[3] = {"p0", "p1", "p2"};
const char* kTauName[3] = {"P", "P_2pi/3", "P_4pi/3"};

double s3_tangent_diff(const s3::Tangent& a, const s3::Tangent& b) {
  return vmax(Vec6(s3::coords(a) - s3::coords(b)));
}

void s3s3_invariants(Runner& run) {
  for (int t = 0; t < 3; ++t) {
    const s3::Rotation tau = s3::rotation_from_tag(t);
    const std::string base = std::string("s3s3.") + kTauSuffix[t];
    const std::string p = kTauName[t];
    const auto P = [tau](const s3::Tangent& x) { return s3::aps_P(x, tau); };
    run.check(base + ".involutive", p + "^2 = Id", 1e-12, [&](CounterRng& rng) {
      const s3::Tangent x = s3::random_tangent(s3::random_point(rng), rng);
      return s3_tangent_diff(P(P(x)), x);
    });
    run.check(base + ".isometric", "g(" + p + "X, " + p + "Y) = g(X, Y)", 1e-12, [&](CounterRng& rng) {
      const s3::Point pt = s3::random_point(rng);
      const s3::Tangent x = s3::random_tangent(pt, rng), y = s3::random_tangent(pt, rng);
      return std::abs(s3::metric_g(P(x), P(y)) - s3::metric_g(x, y));
    });
    run.check(base + ".symmetric", "g(" + p + "X, Y) = g(X, " + p + "Y)", 1e-12, [&](CounterRng& rng) {
      const s3::Point pt = s3::random_point(rng);
      const s3::Tangent x = s3::random_tangent(pt, rng), y = s3::random_tangent(pt, rng);
      return std::abs(s3::metric_g(P(x), y) - s3::metric_g(x, P(y)));
    });
    run.check(base + ".anticommutes", p + " J = -J " + p, 1e-12, [&](CounterRng& rng) {
      const s3::Tangent x = s3::random_tangent(s3::random_point(rng), rng);
      return vmax(Vec6(s3::coords(P(s3::acs_J(x))) + s3::coords(s3::acs_J(P(x)))));
    });
    run.check(base + ".curvature", "curvature formula unchanged with P replaced by " + p, 1e-12,
              [&](CounterRng& rng) {
                const s3::Point pt = s3::random_point(rng);
                const Vec6 u = s3::coords(s3::random_tangent(pt, rng));
                const Vec6 v = s3::coords(s3::random_tangent(pt, rng));
                const Vec6 w = s3::coords(s3::random_tangent(pt, rng));
                const Vec6 with_p = s3::coords(s3::curvature_R(s3::from_coords(pt, u), s3::from_coords(pt, v),
                                                               s3::from_coords(pt, w)));
                return vmax(Vec6(s3::curvature_with_product(u, v, w, s3::p_matrix(tau)) - with_p));
              });
  }

  run.check("s3s3.p0.nabla-j", "P (nabla_X J)Y + (nabla_PX J)PY = 0", 1e-5, [&](CounterRng& rng) {
    const auto chart = s3::chart_at(s3::random_point(rng));
    const Vec x = Vec::Zero(6);
    const MatrixField g = oracle::pullback_metric(chart, s3::metric_g);
    const MatrixField j = oracle::pullback_endomorphism(chart, s3::metric_g, s3::acs_J);
    const auto p_endo = [](const s3::Tangent& t) { return s3::aps_P(t); };
    const oracle::Mat pm = oracle::pullback_endomorphism(chart, s3::metric_g, p_endo)(x);
    const Tensor3 n = oracle::nabla_endomorphism_numeric(g, j, x, run.step());
    double d = 0.0;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        Vec lhs = Vec::Zero(6), rhs = Vec::Zero(6);
        for (int c = 0; c < 6; ++c) lhs(c) = n(a, b, c);
        lhs = pm * lhs;
        for (int u = 0; u < 6; ++u)
          for (int v = 0; v < 6; ++v)
            for (int c = 0; c < 6; ++c) rhs(c) += pm(u, a) * pm(v, b) * n(u, v, c);
        d = std::max(d, (lhs + rhs).cwiseAbs().maxCoeff());
      }
    return d;
  });

  run.check("s3s3.j.almost-hermitian", "J^2 = -Id, g(JX, JY) = g(X, Y)", 1e-12, [](CounterRng& rng) {
    const s3::Point pt = s3::random_point(rng);
    const s3::Tangent x = s3::random_tangent(pt, rng), y = s3::random_tangent(pt, rng);
    return std::max(vmax(Vec6(s3::coords(s3::acs_J(s3::acs_J(x))) + s3::coords(x))),
                    std::abs(s3::metric_g(s3::acs_J(x), s3::acs_J(y)) - s3::metric_g(x, y)));
  });

  run.fixed("s3s3.curvature.spot", "R((i,0),(j,0))(j,0) = (i,0) at (1,1)", 1e-12, [] {
    const s3::Point o{};
    const s3::Tangent ui{o, {1, 0, 0}, {}}, uj{o, {0, 1, 0}, {}};
    return s3_tangent_diff(s3::curvature_R(ui, uj, uj), ui);
  });

  run.check("s3s3.psi.relations", "J dPsi = (-1)^kappa dPsi J, P dPsi = dPsi (cos tau P + sin tau JP)", 1e-12,
            [](CounterRng& rng) {
              const s3::Tangent x = s3::random_tangent(s3::random_point(rng), rng);
              double d = 0.0;
              for (int kappa = 0; kappa < 2; ++kappa)
                for (int t = 0; t < 3; ++t) {
                  const s3::Rotation tau = s3::rotation_from_tag(t);
                  const s3::Isometry psi = s3::Isometry::psi(kappa, tau);
                  const double sign = kappa ? -1.0 : 1.0;
                  const Vec6 jd = s3::coords(s3::acs_J(s3::iso_differential(psi, x)));
                  const Vec6 dj = s3::coords(s3::iso_differential(psi, s3::acs_J(x)));
                  const Vec6 pd = s3::coords(s3::aps_P(s3::iso_differential(psi, x)));
                  const Vec6 dp = s3::coords(s3::iso_differential(psi, s3::aps_P(x, tau)));
                  d = std::max({d, vmax(Vec6(jd - sign * dj)), vmax(Vec6(pd - dp))});
                }
              return d;
            });

  run.check("s3s3.translation.structures", "dphi J = J dphi, dphi P = P dphi for phi_(a,b,c)", 1e-12,
            [](CounterRng& rng) {
              const s3::Isometry f = s3::Isometry::translation(random_unit_quaternion(rng),
                                                               random_unit_quaternion(rng),
                                                               random_unit_quaternion(rng));
              const s3::Tangent x = s3::random_tangent(s3::random_point(rng), rng);
              const Vec6 jd = s3::coords(s3::acs_J(s3::iso_differential(f, x)));
              const Vec6 dj = s3::coords(s3::iso_differential(f, s3::acs_J(x)));
              const Vec6 pd = s3::coords(s3::aps_P(s3::iso_differential(f, x)));
              const Vec6 dp = s3::coords(s3::iso_differential(f, s3::aps_P(x)));
              return std::max(vmax(Vec6(jd - dj)), vmax(Vec6(pd - dp)));
            });

  run.check("s3s3.preserve.metric", "g(dF X, dF Y) = g(X, Y) for phi_(a,b,c) and the six Psi", 1e-10,
            [](CounterRng& rng) {
              std::vector<s3::Isometry> maps{s3::Isometry::translation(
                  random_unit_quaternion(rng), random_unit_quaternion(rng), random_unit_quaternion(rng))};
              for (int kappa = 0; kappa < 2; ++kappa)
                for (int t = 0; t < 3; ++t) maps.push_back(s3::Isometry::psi(kappa, s3::rotation_from_tag(t)));
              const s3::Point pt = s3::random_point(rng);
              const s3::Tangent x = s3::random_tangent(pt, rng), y = s3::random_tangent(pt, rng);
              double d = 0.0;
              for (const s3::Isometry& f : maps) {
                d = std::max(d, std::abs(s3::metric_g(s3::iso_differential(f, x), s3::iso_differential(f, y)) -
                                         s3::metric_g(x, y)));
              }
              return d;
            });
}

void s3s3_curvature(Runner& run) {
  const std::string name = "s3s3.curvature.oracle";
  const auto chart_for = [&](std::size_t k) {
    CounterRng rng = CounterRng::named(run.config().seed, name, k);
    return s3::chart_at(s3::random_point(rng));
  };
  const auto closed = [&](std::size_t k) {
    return closed_lowered(chart_for(k).frame(Vec::Zero(6)), s3::metric_g, s3::curvature_R);
  };
  const auto numeric = [&](std::size_t k) {
    const MatrixField g = oracle::pullback_metric(chart_for(k), s3::metric_g);
    const Vec x = Vec::Zero(6);
    return flatten(oracle::lower_riemann(oracle::riemann_numeric(g, x, run.step()), g(x)));
  };
  run.add(compare_tensor(name, "closed-form curvature vs finite-difference Riemann tensor (relative)", closed,
                         numeric, run.samples(), 1e-4));

  run.check("s3s3.curvature.symmetries", "R_ijkl = -R_jikl = -R_ijlk = R_klij, first Bianchi", 1e-12,
            [](CounterRng& rng) {
              const s3::Point pt = s3::random_point(rng);
              std::vector<s3::Tangent> e;
              for (int i = 0; i < 6; ++i) e.push_back(s3::from_coords(pt, Vec6::Unit(i)));
              const std::vector<double> r = closed_lowered(e, s3::metric_g, s3::curvature_R);
              return riemann_symmetry_defect(
                  [&](int i, int j, int k, int l) { return r[((i * 6 + j) * 6 + k) * 6 + l]; });
            });
}

void s3s3_nk(Runner& run) {
  run.check("s3s3.nk.defect", "(nabla_X J)X = 0", 1e-5, [&](CounterRng& rng, Check& c) {
    const auto chart = s3::chart_at(s3::random_point(rng));
    const MatrixField g = oracle::pullback_metric(chart, s3::metric_g);
    const MatrixField j = oracle::pullback_endomorphism(chart, s3::metric_g, s3::acs_J);
    return nk_defect(oracle::nabla_endomorphism_numeric(g, j, Vec::Zero(6), run.step()), c);
  });
}

void s3s3_decompose(Runner& run) {
  run.check("s3s3.decompose.roundtrip", "decompose(F) = F: kappa, tau exact, (a,b,c) up to sign", 1e-8,
            [](CounterRng& rng) {
              const s3::Isometry f = s3::random_isometry(rng);
              return s3::distance(s3::decompose_isometry(s3::make_oracle(f)), f);
            });
}

void s3s3_group(Runner& run) {
  using s3::iso_compose;
  run.check("s3s3.group.associativity", "(F G) H = F (G H)", 1e-12, [](CounterRng& rng) {
    const s3::Isometry f = s3::random_isometry(rng), g = s3::random_isometry(rng), h = s3::random_isometry(rng);
    return s3::distance(iso_compose(iso_compose(f, g), h), iso_compose(f, iso_compose(g, h)));
  });
  run.check("s3s3.group.identity", "F Id = Id F = F", 1e-12, [](CounterRng& rng) {
    const s3::Isometry f = s3::random_isometry(rng);
    return std::max(s3::distance(iso_compose(f, s3::Isometry::identity()), f),
                    s3::distance(iso_compose(s3::Isometry::identity(), f), f));
  });
  run.check("s3s3.group.inverse", "F F^-1 = F^-1 F = Id", 1e-12, [](CounterRng& rng) {
    const s3::Isometry f = s3::random_isometry(rng);
    return std::max(s3::distance(iso_compose(f, s3::iso_inverse(f)), s3::Isometry::identity()),
                    s3::distance(iso_compose(s3::iso_inverse(f), f), s3::Isometry::identity()));
  });
  run.check("s3s3.group.action", "(F G) p = F (G p)", 1e-12, [](CounterRng& rng) {
    const s3::Isometry f = s3::random_isometry(rng), g = s3::random_isometry(rng);
    const s3::Point p = s3::random_point(rng);
    return s3::point_distance(s3::iso_apply(iso_compose(f, g), p), s3::iso_apply(f, s3::iso_apply(g, p)));
  });
}

// ---------------------------------------------------------------- CP3

double cp3_diff(const cp3::Tangent& a, const cp3::Tangent& b) { return vmax(Vec4c(a.horiz - b.horiz)); }

cp3::Isometry cp3_generator(CounterRng& rng, bool conjugation) {
  return conjugation ? cp3::Isometry::conjugation() : cp3::random_isometry(rng);
}

void cp3_invariants(Runner& run) {
  using cp3::Structure;
  run.check("cp3.structures", "P^2 = Id, Jcirc^2 = Jnk^2 = -Id, Jnk = P Jcirc = Jcirc P", 1e-12,
            [](CounterRng& rng) {
              const cp3::Tangent x = cp3::random_tangent(cp3::random_point(rng), rng);
              const auto s = [](const cp3::Tangent& t, Structure w) { return cp3::structures(t, w); };
              cp3::Tangent minus = x;
              minus.horiz = -x.horiz;
              const cp3::Tangent jnk = s(x, Structure::Jnk);
              return std::max({cp3_diff(s(s(x, Structure::P), Structure::P), x),
                               cp3_diff(s(s(x, Structure::Jcirc), Structure::Jcirc), minus),
                               cp3_diff(s(jnk, Structure::Jnk), minus),
                               cp3_diff(s(s(x, Structure::Jcirc), Structure::P), jnk),
                               cp3_diff(s(s(x, Structure::P), Structure::Jcirc), jnk)});
            });
  run.check("cp3.quaternionic", "j^2 = -1, j i = -i j on C^4", 1e-12, [](CounterRng& rng) {
    const Vec4c p = cp3::random_point(rng).rep;
    const cplx i(0.0, 1.0);
    return std::max(vmax(Vec4c(cp3::quat_j(cp3::quat_j(p)) + p)),
                    vmax(Vec4c(cp3::quat_j(Vec4c(i * p)) + i * cp3::quat_j(p))));
  });
  run.check("cp3.preserve.metric", "g(dF X, dF Y) = g(X, Y) for Sp(2) and conjugation", 1e-10,
            [](CounterRng& rng) {
              double d = 0.0;
              for (bool conj : {false, true}) {
                const cp3::Isometry f = cp3_generator(rng, conj);
                const cp3::Point p = cp3::random_point(rng);
                const cp3::Tangent x = cp3::random_tangent(p, rng), y = cp3::random_tangent(p, rng);
                d = std::max(d, std::abs(cp3::metric_g_nk(cp3::iso_differential_cp3(f, x),
                                                          cp3::iso_differential_cp3(f, y)) -
                                         cp3::metric_g_nk(x, y)));
              }
              return d;
            });
  run.check("cp3.preserve.splitting", "dF D^2 = D^2, dF D^4 = D^4 for Sp(2) and conjugation", 1e-10,
            [](CounterRng& rng) {
              double d = 0.0;
              for (bool conj : {false, true}) {
                const cp3::Isometry f = cp3_generator(rng, conj);
                const cp3::Point p = cp3::random_point(rng);
                const cp3::Tangent x = cp3::random_tangent(p, rng);
                const cp3::Tangent x2 = cp3::iso_differential_cp3(f, cp3::split_tangent(p, x.d2));
                const cp3::Tangent x4 = cp3::iso_differential_cp3(f, cp3::split_tangent(p, x.d4));
                d = std::max({d, x2.d4.norm(), x4.d2.norm()});
              }
              return d;
            });
}

MatrixField cp3_metric_field(const oracle::Chart<cp3::Tangent>& chart) {
  return oracle::pullback_metric(chart, cp3::metric_g_nk);
}

void cp3_curvature(Runner& run) {
  run.check("cp3.curvature.symmetries", "numeric R_ijkl = -R_jikl = -R_ijlk = R_klij, first Bianchi", 1e-5,
            [&](CounterRng& rng) {
              const MatrixField g = cp3_metric_field(cp3::chart_at(cp3::random_point(rng)));
              const Vec x = Vec::Zero(6);
              const Tensor4 r = oracle::lower_riemann(oracle::riemann_numeric(g, x, run.step()), g(x));
              return riemann_symmetry_defect([&](int i, int j, int k, int l) { return r(i, j, k, l); });
            });
  run.check("cp3.curvature.metric-compatibility", "numeric nabla g = 0", 1e-8, [&](CounterRng& rng) {
    const MatrixField g = cp3_metric_field(cp3::chart_at(cp3::random_point(rng)));
    return oracle::nabla_metric_numeric(g, Vec::Zero(6), run.step()).max_abs();
  });
}

void cp3_nk(Runner& run) {
  run.check("cp3.nk.defect", "(nabla_X Jnk)X = 0", 1e-5, [&](CounterRng& rng, Check& c) {
    const auto chart = cp3::chart_at(cp3::random_point(rng));
    const MatrixField j = oracle::pullback_endomorphism(chart, cp3::metric_g_nk, [](const cp3::Tangent& t) {
      return cp3::structures(t, cp3::Structure::Jnk);
    });
    return nk_defect(oracle::nabla_endomorphism_numeric(cp3_metric_field(chart), j, Vec::Zero(6), run.step()), c);
  });
  run.check("cp3.kaehler.fubini-study", "nabla Jcirc = 0 for the Fubini-Study metric", 1e-5, [&](CounterRng& rng) {
    const auto chart = cp3::chart_at(cp3::random_point(rng));
    const MatrixField g = oracle::pullback_metric(chart, cp3::metric_fs);
    const MatrixField j = oracle::pullback_endomorphism(chart, cp3::metric_fs, [](const cp3::Tangent& t) {
      return cp3::structures(t, cp3::Structure::Jcirc);
    });
    return oracle::nabla_endomorphism_numeric(g, j, Vec::Zero(6), run.step()).max_abs();
  });
}

void cp3_decompose(Runner& run) {
  run.check("cp3.descend.roundtrip", "a phase multiple of A in Sp(2) descends to (A, 0)", 1e-10,
            [](CounterRng& rng) {
              const Mat4c a = random_sp2(rng);
              const cplx phase = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
              const auto got = cp3::descends_to_nk_isometry(phase * a);
              return got ? cp3::distance(*got, cp3::Isometry{a, 0}) : kInf;
            });
  run.check("cp3.descend.rejects", "a generic unitary matrix does not descend", 0.0, [](CounterRng& rng) {
    return cp3::descends_to_nk_isometry(Mat4c(random_unitary(4, rng))) ? 1.0 : 0.0;
  });
}

void cp3_group(Runner& run) {
  using cp3::iso_compose_cp3;
  const cp3::Isometry id = cp3::Isometry::identity();
  run.check("cp3.group.associativity", "(F G) H = F (G H)", 1e-12, [](CounterRng& rng) {
    const cp3::Isometry f = cp3::random_isometry(rng), g = cp3::random_isometry(rng), h = cp3::random_isometry(rng);
    return cp3::distance(iso_compose_cp3(iso_compose_cp3(f, g), h), iso_compose_cp3(f, iso_compose_cp3(g, h)));
  });
  run.check("cp3.group.identity", "F Id = Id F = F", 1e-12, [&](CounterRng& rng) {
    const cp3::Isometry f = cp3::random_isometry(rng);
    return std::max(cp3::distance(iso_compose_cp3(f, id), f), cp3::distance(iso_compose_cp3(id, f), f));
  });
  run.check("cp3.group.inverse", "F F^-1 = F^-1 F = Id", 1e-12, [&](CounterRng& rng) {
    const cp3::Isometry f = cp3::random_isometry(rng);
    return std::max(cp3::distance(iso_compose_cp3(f, cp3::iso_inverse_cp3(f)), id),
                    cp3::distance(iso_compose_cp3(cp3::iso_inverse_cp3(f), f), id));
  });
  run.check("cp3.group.action", "(F G) p = F (G p)", 1e-12, [](CounterRng& rng) {
    const cp3::Isometry f = cp3::random_isometry(rng), g = cp3::random_isometry(rng);
    const cp3::Point p = cp3::random_point(rng);
    return cp3::point_distance(cp3::iso_apply_cp3(iso_compose_cp3(f, g), p),
                               cp3::iso_apply_cp3(f, cp3::iso_apply_cp3(g, p)));
  });
}

// ---------------------------------------------------------------- flag

using flag::Acs;

flag::Tangent unit_tangent(const flag::Point& p, const Vec6& c) { return {p, c.normalized()}; }

struct TableEntry {
  Acs target;
  int sign;
};

/// dF S = sign S' dF for S = J, J1, J2, J3, per map phi_1..phi_5 and conjugation.
const TableEntry kTable[6][4] = {
    {{Acs::J, -1}, {Acs::J1, -1}, {Acs::J3, -1}, {Acs::J2, -1}},
    {{Acs::J, -1}, {Acs::J3, -1}, {Acs::J2, -1}, {Acs::J1, -1}},
    {{Acs::J, -1}, {Acs::J2, -1}, {Acs::J1, -1}, {Acs::J3, -1}},
    {{Acs::J, 1}, {Acs::J2, 1}, {Acs::J3, 1}, {Acs::J1, 1}},
    {{Acs::J, 1}, {Acs::J3, 1}, {Acs::J1, 1}, {Acs::J2, 1}},
    {{Acs::J, -1}, {Acs::J1, -1}, {Acs::J2, -1}, {Acs::J3, -1}},
};

flag::Isometry table_map(int row) { return row < 5 ? flag::Isometry::phi(row + 1) : flag::Isometry::conjugation(); }

void flag_invariants(Runner& run) {
  run.check("flag.acs", "J^2 = J_i^2 = -Id, g(JX, JY) = g(X, Y)", 1e-12, [](CounterRng& rng) {
    const flag::Point p = flag::random_point(rng);
    const flag::Tangent x = flag::random_tangent(p, rng), y = flag::random_tangent(p, rng);
    double d = std::abs(flag::metric_flag(flag::acs_flag(x, Acs::J), flag::acs_flag(y, Acs::J)) -
                        flag::metric_flag(x, y));
    for (Acs a : {Acs::J, Acs::J1, Acs::J2, Acs::J3}) {
      d = std::max(d, vmax(Vec6(flag::acs_flag(flag::acs_flag(x, a), a).coeffs + x.coeffs)));
    }
    return d;
  });
  run.check("flag.torus.j", "Ad_t J = J Ad_t for t in the isotropy torus", 1e-12, [](CounterRng& rng) {
    const double a = rng.uniform(0.0, 2.0 * std::numbers::pi), b = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Mat3c t = Mat3c::Zero();
    t.diagonal() << std::polar(1.0, a), std::polar(1.0, b), std::polar(1.0, -a - b);
    const flag::Tangent x = flag::random_tangent(flag::Point{}, rng);
    const auto ad = [&](const Vec6& v) { return flag::algebra_coeffs(Mat3c(t * flag::algebra_element(v) * t.adjoint())); };
    double d = 0.0;
    for (Acs s : {Acs::J, Acs::J1, Acs::J2, Acs::J3}) {
      d = std::max(d, vmax(Vec6(flag::acs_flag({x.base, ad(x.coeffs)}, s).coeffs -
                                ad(flag::acs_flag(x, s).coeffs))));
    }
    return d;
  });
  run.check("flag.holsec.blocks", "g(R(X,JX)JX,X) = 4 for unit X in V_i", 1e-12, [](CounterRng& rng) {
    const flag::Point p = flag::random_point(rng);
    double d = 0.0;
    for (int block = 1; block <= 3; ++block) {
      const flag::Tangent x = unit_tangent(p, flag::block_part(flag::random_tangent(p, rng).coeffs, block));
      const flag::Tangent jx = flag::acs_flag(x, Acs::J);
      d = std::max({d, std::abs(flag::hol_sec_curvature(x) - 4.0),
                    std::abs(flag::metric_flag(flag::curvature_flag(x, jx, jx), x) - 4.0)});
    }
    return d;
  });
  run.fixed("flag.holsec.mixed", "g(R(X,JX)JX,X) = 1 at X = (m1 + m3)/sqrt(2)", 1e-12, [] {
    const flag::Tangent x = unit_tangent(flag::Point{}, Vec6::Unit(0) + Vec6::Unit(2));
    const flag::Tangent jx = flag::acs_flag(x, Acs::J);
    return std::max(std::abs(flag::hol_sec_curvature(x) - 1.0),
                    std::abs(flag::metric_flag(flag::curvature_flag(x, jx, jx), x) - 1.0));
  });
  run.check("flag.holsec.bound", "g(R(X,JX)JX,X) <= 4 for unit X (excess over 4)", 1e-9,
            [](CounterRng& rng, Check& c) {
              const flag::Point p = flag::random_point(rng);
              const double h = flag::hol_sec_curvature(unit_tangent(p, flag::random_tangent(p, rng).coeffs));
              c.note("max_value", h);
              return std::max(0.0, h - 4.0);
            });
  run.check("flag.holsec.formula", "-1/2 + 3/2 sum g(J J_i X, X)^2 = g(R(X,JX)JX,X)", 1e-12, [](CounterRng& rng) {
    const flag::Point p = flag::random_point(rng);
    const flag::Tangent x = unit_tangent(p, flag::random_tangent(p, rng).coeffs);
    const flag::Tangent jx = flag::acs_flag(x, Acs::J);
    return std::abs(flag::hol_sec_curvature(x) - flag::metric_flag(flag::curvature_flag(x, jx, jx), x));
  });
  run.check("flag.table", "dphi_i S = +-S' dphi_i and dPsi S = -S dPsi, 24 entries", 1e-12, [](CounterRng& rng) {
    const flag::Point p = flag::random_point(rng);
    const flag::Tangent x = flag::random_tangent(p, rng);
    const Acs sources[4] = {Acs::J, Acs::J1, Acs::J2, Acs::J3};
    double d = 0.0;
    for (int row = 0; row < 6; ++row) {
      const flag::Isometry f = table_map(row);
      for (int s = 0; s < 4; ++s) {
        const Vec6 lhs = flag::iso_differential_flag(f, flag::acs_flag(x, sources[s])).coeffs;
        const Vec6 rhs = flag::acs_flag(flag::iso_differential_flag(f, x), kTable[row][s].target).coeffs;
        d = std::max(d, vmax(Vec6(lhs - kTable[row][s].sign * rhs)));
      }
    }
    return d;
  });
  run.check("flag.distributions", "phi_i fixes V_i and swaps the others (i = 1, 2, 3); phi_4, phi_5 cycle; Psi fixes all",
            1e-12, [](CounterRng& rng) {
              static const int images[7][3] = {{1, 2, 3}, {1, 3, 2}, {3, 2, 1}, {2, 1, 3},
                                               {2, 3, 1}, {3, 1, 2}, {1, 2, 3}};
              const flag::Point p = flag::random_point(rng);
              double d = 0.0;
              for (int i = 0; i < 7; ++i) {
                const flag::Isometry f = i < 6 ? flag::Isometry::phi(i) : flag::Isometry::conjugation();
                for (int b = 1; b <= 3; ++b) {
                  const flag::Tangent x{p, flag::block_part(flag::random_tangent(p, rng).coeffs, b)};
                  const Vec6 image = flag::iso_differential_flag(f, x).coeffs;
                  d = std::max(d, vmax(Vec6(flag::block_part(image, images[i][b - 1]) - image)));
                }
              }
              return d;
            });
  run.check("flag.projections", "pi_1, pi_2, pi_3 well defined; phi_i(l, Pi) as listed", 1e-12, [](CounterRng& rng) {
    const flag::Point p = flag::random_point(rng);
    const Vec3c v1 = flag::projection(p, 3), v2 = flag::projection(p, 2), v3 = flag::projection(p, 1);
    const double a = rng.uniform(0.0, 7.0), b = rng.uniform(0.0, 7.0);
    Mat3c t = Mat3c::Zero();
    t.diagonal() << std::polar(1.0, a), std::polar(1.0, b), std::polar(1.0, -a - b);
    const flag::Point q{p.rep * t};
    double d = 0.0;
    for (int w = 1; w <= 3; ++w) d = std::max(d, flag::line_distance(flag::projection(p, w), flag::projection(q, w)));
    const Vec3c lines[6][2] = {{v1, v3}, {v2, v3}, {v3, v1}, {v1, v2}, {v2, v1}, {v3, v2}};
    for (int i = 0; i < 6; ++i) {
      const flag::Point image = flag::iso_apply_flag(flag::Isometry::phi(i), p);
      d = std::max({d, flag::line_distance(flag::projection(image, 3), lines[i][0]),
                    flag::line_distance(flag::projection(image, 1), lines[i][1])});
    }
    return d;
  });
  run.check("flag.preserve.metric", "g(dF X, dF Y) = g(X, Y) for SU(3), the six phi and Psi", 1e-10,
            [](CounterRng& rng) {
              std::vector<flag::Isometry> maps{flag::Isometry::translation(random_su3(rng)),
                                               flag::Isometry::conjugation()};
              for (int i = 0; i < 6; ++i) maps.push_back(flag::Isometry::phi(i));
              const flag::Point p = flag::random_point(rng);
              const flag::Tangent x = flag::random_tangent(p, rng), y = flag::random_tangent(p, rng);
              double d = 0.0;
              for (const flag::Isometry& f : maps) {
                d = std::max(d, std::abs(flag::metric_flag(flag::iso_differential_flag(f, x),
                                                           flag::iso_differential_flag(f, y)) -
                                         flag::metric_flag(x, y)));
              }
              return d;
            });
  run.check("flag.preserve.su3", "SU(3) preserves J, J_i and V_i", 1e-10, [](CounterRng& rng) {
    const flag::Isometry f = flag::Isometry::translation(random_su3(rng));
    const flag::Point p = flag::random_point(rng);
    const flag::Tangent x = flag::random_tangent(p, rng);
    const flag::Tangent fx = flag::iso_differential_flag(f, x);
    double d = 0.0;
    for (Acs a : {Acs::J, Acs::J1, Acs::J2, Acs::J3}) {
      d = std::max(d, vmax(Vec6(flag::iso_differential_flag(f, flag::acs_flag(x, a)).coeffs -
                                flag::acs_flag(fx, a).coeffs)));
    }
    for (int b = 1; b <= 3; ++b) {
      const Vec6 image = flag::iso_differential_flag(f, flag::Tangent{p, flag::block_part(x.coeffs, b)}).coeffs;
      d = std::max(d, vmax(Vec6(flag::block_part(image, b) - image)));
    }
    return d;
  });
}

void flag_curvature(Runner& run) {
  const std::string name = "flag.curvature.oracle";
  const auto chart_for = [&](std::size_t k) {
    CounterRng rng = CounterRng::named(run.config().seed, name, k);
    return flag::chart_at(flag::random_point(rng));
  };
  const auto closed = [&](std::size_t k) {
    return closed_lowered(chart_for(k).frame(Vec::Zero(6)), flag::metric_flag, flag::curvature_flag);
  };
  const auto numeric = [&](std::size_t k) {
    const MatrixField g = oracle::pullback_metric(chart_for(k), flag::metric_flag);
    const Vec x = Vec::Zero(6);
    return flatten(oracle::lower_riemann(oracle::riemann_numeric(g, x, run.step()), g(x)));
  };
  run.add(compare_tensor(name, "closed-form curvature vs finite-difference Riemann tensor (relative)", closed,
                         numeric, run.samples(), 1e-4));
  run.check("flag.curvature.symmetries", "R_ijkl = -R_jikl = -R_ijlk = R_klij, first Bianchi", 1e-12,
            [](CounterRng& rng) {
              const flag::Point p = flag::random_point(rng);
              std::vector<flag::Tangent> e;
              for (int i = 0; i < 6; ++i) e.push_back({p, Vec6::Unit(i)});
              const std::vector<double> r = closed_lowered(e, flag::metric_flag, flag::curvature_flag);
              return riemann_symmetry_defect(
                  [&](int i, int j, int k, int l) { return r[((i * 6 + j) * 6 + k) * 6 + l]; });
            });
}

void flag_nk(Runner& run) {
  run.check("flag.nk.defect", "(nabla_X J)X = 0", 1e-5, [&](CounterRng& rng, Check& c) {
    const auto chart = flag::chart_at(flag::random_point(rng));
    const MatrixField g = oracle::pullback_metric(chart, flag::metric_flag);
    const MatrixField j = oracle::pullback_endomorphism(chart, flag::metric_flag,
                                                        [](const flag::Tangent& t) { return flag::acs_flag(t, Acs::J); });
    return nk_defect(oracle::nabla_endomorphism_numeric(g, j, Vec::Zero(6), run.step()), c);
  });
  for (int block = 1; block <= 3; ++block) {
    run.check("flag.kaehler.j" + std::to_string(block),
              "nabla J_" + std::to_string(block) + " = 0 for g_" + std::to_string(block), 1e-5, [&](CounterRng& rng) {
                const auto chart = flag::chart_at(flag::random_point(rng));
                const auto gi = [block](const flag::Tangent& a, const flag::Tangent& b) {
                  return flag::metric_flag_i(a, b, block);
                };
                const Acs which = flag::acs_for_block(block);
                const MatrixField g = oracle::pullback_metric(chart, gi);
                const MatrixField j = oracle::pullback_endomorphism(
                    chart, gi, [which](const flag::Tangent& t) { return flag::acs_flag(t, which); });
                return oracle::nabla_endomorphism_numeric(g, j, Vec::Zero(6), run.step()).max_abs();
              });
  }
  run.check("flag.nk.cross-product", "nabla J(V_i, V_j) in V_k, nabla J(V_i, V_i) = 0", 1e-5, [&](CounterRng& rng) {
    const flag::Point p = flag::random_point(rng);
    const auto chart = flag::chart_at(p);
    const MatrixField g = oracle::pullback_metric(chart, flag::metric_flag);
    const MatrixField j = oracle::pullback_endomorphism(chart, flag::metric_flag,
                                                        [](const flag::Tangent& t) { return flag::acs_flag(t, Acs::J); });
    const Tensor3 n = oracle::nabla_endomorphism_numeric(g, j, Vec::Zero(6), run.step());
    double d = 0.0;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        const int ba = a / 2, bb = b / 2;
        for (int c = 0; c < 6; ++c) {
          const int bc = c / 2;
          const bool allowed = ba != bb && bc != ba && bc != bb;
          if (!allowed) d = std::max(d, std::abs(n(a, b, c)));
        }
      }
    return d;
  });
}

void flag_decompose(Runner& run) {
  run.check("flag.decompose.roundtrip", "decompose(F) = F: sigma, k exact, A modulo the center", 1e-8,
            [](CounterRng& rng) {
              const flag::Isometry f = flag::random_isometry(rng);
              return flag::distance(flag::decompose_flag_isometry(flag::make_oracle(f)), f);
            });
}

void flag_group(Runner& run) {
  using flag::iso_compose_flag;
  const flag::Isometry id = flag::Isometry::identity();
  run.check("flag.group.associativity", "(F G) H = F (G H)", 1e-12, [](CounterRng& rng) {
    const flag::Isometry f = flag::random_isometry(rng), g = flag::random_isometry(rng),
                         h = flag::random_isometry(rng);
    return flag::distance(iso_compose_flag(iso_compose_flag(f, g), h), iso_compose_flag(f, iso_compose_flag(g, h)));
  });
  run.check("flag.group.identity", "F Id = Id F = F", 1e-12, [&](CounterRng& rng) {
    const flag::Isometry f = flag::random_isometry(rng);
    return std::max(flag::distance(iso_compose_flag(f, id), f), flag::distance(iso_compose_flag(id, f), f));
  });
  run.check("flag.group.inverse", "F F^-1 = F^-1 F = Id", 1e-12, [&](CounterRng& rng) {
    const flag::Isometry f = flag::random_isometry(rng);
    return std::max(flag::distance(iso_compose_flag(f, flag::iso_inverse_flag(f)), id),
                    flag::distance(iso_compose_flag(flag::iso_inverse_flag(f), f), id));
  });
  run.check("flag.group.action", "(F G) p = F (G p)", 1e-12, [](CounterRng& rng) {
    const flag::Isometry f = flag::random_isometry(rng), g = flag::random_isometry(rng);
    const flag::Point p = flag::random_point(rng);
    return flag::point_distance(flag::iso_apply_flag(iso_compose_flag(f, g), p),
                                flag::iso_apply_flag(f, flag::iso_apply_flag(g, p)));
  });
}

struct SpaceSuites {
  void (*invariants)(Runner&);
  void (*curvature)(Runner&);
  void (*nk)(Runner&);
  void (*decompose)(Runner&);
  void (*group)(Runner&);
};

SpaceSuites suites_for(Space space) {
  switch (space) {
    case Space::S3S3: return {s3s3_invariants, s3s3_curvature, s3s3_nk, s3s3_decompose, s3s3_group};
    case Space::CP3: return {cp3_invariants, cp3_curvature, cp3_nk, cp3_decompose, cp3_group};
    case Space::Flag: return {flag_invariants, flag_curvature, flag_nk, flag_decompose, flag_group};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown space");
}

}  // namespace

VerificationReport run(const RunConfig& config) {
  if (!(config.step.h >= 1e-5 && config.step.h <= 1e-2)) {
    throw Error(ErrorKind::InvalidArgument, "step h must lie in [1e-5, 1e-2]");
  }
  const auto start = std::chrono::steady_clock::now();
  Runner runner(config);
  const SpaceSuites s = suites_for(config.space);
  const bool all = config.suite == Suite::All;
  if (all || config.suite == Suite::Invariants) s.invariants(runner);
  if (all || config.suite == Suite::Curvature) s.curvature(runner);
  if (all || config.suite == Suite::NkDefect) s.nk(runner);
  if (all || config.suite == Suite::Decompose) s.decompose(runner);
  if (all || config.suite == Suite::FuzzGroup) s.group(runner);
  runner.require_keys_used();

  VerificationReport report;
  report.config = {{"command", config.command},
                   {"space", to_string(config.space)},
                   {"suite", to_string(config.suite)},
                   {"samples", std::to_string(config.samples)},
                   {"seed", std::to_string(config.seed)},
                   {"step", format_real(config.step.h)},
                   {"richardson", config.step.richardson ? "1" : "0"}};
  for (const auto& [key, v] : config.tolerances) report.config.emplace_back("tol." + key, format_real(v));
  report.records = runner.take();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace nkiso
