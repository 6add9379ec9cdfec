#include "nkiso/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cctype>
#include <sstream>
#include <vector>

#include "nkiso/error.hpp"
#include "nkiso/report.hpp"

namespace nkiso {

const char* to_string(Space space) {
  switch (space) {
    case Space::S3S3: return "s3s3";
    case Space::CP3: return "cp3";
    case Space::Flag: return "flag";
  }
  return "unknown";
}

Space parse_space(const std::string& name) {
  if (name == "s3s3") return Space::S3S3;
  if (name == "cp3") return Space::CP3;
  if (name == "flag") return Space::Flag;
  throw Error(ErrorKind::InvalidArgument, "unknown space '" + name + "' (expected s3s3, cp3 or flag)");
}

namespace {

void put(std::ostringstream& out, double v) { out << ' ' << format_real(v); }

template <class Matrix>
void put_matrix(std::ostringstream& out, const Matrix& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      put(out, m(r, c).real());
      put(out, m(r, c).imag());
    }
}

struct Token {
  std::string text;
  int column = 0;
};

class LineParser {
 public:
  LineParser(std::string line, int number) : number_(number) {
    std::size_t i = 0;
    while (i < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      tokens_.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    end_column_ = static_cast<int>(line.size()) + 1;
  }

  bool empty() const { return tokens_.empty(); }
  const std::vector<Token>& tokens() const { return tokens_; }

  [[noreturn]] void fail(int column, const std::string& message) const {
    throw Error(ErrorKind::Parse, "line " + std::to_string(number_) + ", column " +
                                      std::to_string(column) + ": " + message);
  }

  double real(const std::string& text, int column) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
      fail(column, "expected a finite real, got '" + text + "'");
    }
    return v;
  }

  int integer(const std::string& text, int column) const {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      fail(column, "expected an integer, got '" + text + "'");
    }
    return v;
  }

  /// Positional element record after the space keyword: `reals` reals, then `ints` integers.
  std::pair<std::vector<double>, std::vector<int>> record(std::size_t reals, std::size_t ints) const {
    const std::size_t want = 1 + reals + ints;
    if (tokens_.size() < want) {
      fail(end_column_, "element record needs " + std::to_string(reals) + " reals and " +
                            std::to_string(ints) + " integers");
    }
    if (tokens_.size() > want) fail(tokens_[want].column, "unexpected trailing token");
    std::vector<double> r;
    std::vector<int> n;
    for (std::size_t i = 1; i <= reals; ++i) r.push_back(real(tokens_[i].text, tokens_[i].column));
    for (std::size_t i = 1 + reals; i < want; ++i) n.push_back(integer(tokens_[i].text, tokens_[i].column));
    return {r, n};
  }

  /// key=v1,v2,... parameters; every key in `keys` is required, no others allowed.
  struct Param {
    std::vector<std::string> values;
    std::vector<int> columns;
  };
  std::vector<Param> params(const std::vector<std::string>& keys) const {
    std::vector<Param> out(keys.size());
    std::vector<bool> seen(keys.size(), false);
    for (std::size_t t = 1; t < tokens_.size(); ++t) {
      const Token& tok = tokens_[t];
      const auto eq = tok.text.find('=');
      if (eq == std::string::npos) fail(tok.column, "expected key=value, got '" + tok.text + "'");
      const std::string key = tok.text.substr(0, eq);
      std::size_t idx = keys.size();
      for (std::size_t k = 0; k < keys.size(); ++k)
        if (keys[k] == key) idx = k;
      if (idx == keys.size()) fail(tok.column, "unknown parameter '" + key + "'");
      if (seen[idx]) fail(tok.column, "duplicate parameter '" + key + "'");
      seen[idx] = true;
      std::size_t pos = eq + 1;
      while (true) {
        const std::size_t comma = tok.text.find(',', pos);
        const std::size_t stop = comma == std::string::npos ? tok.text.size() : comma;
        out[idx].values.push_back(tok.text.substr(pos, stop - pos));
        out[idx].columns.push_back(tok.column + static_cast<int>(pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
    for (std::size_t k = 0; k < keys.size(); ++k)
      if (!seen[k]) fail(end_column_, "missing parameter '" + keys[k] + "'");
    return out;
  }

  std::vector<double> reals(const Param& p, std::size_t count, const std::string& key) const {
    if (p.values.size() != count) {
      fail(p.columns.front(), "'" + key + "' needs " + std::to_string(count) + " values");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(real(p.values[i], p.columns[i]));
    return out;
  }

  int single_int(const Param& p, const std::string& key) const {
    if (p.values.size() != 1) fail(p.columns.front(), "'" + key + "' needs one value");
    return integer(p.values[0], p.columns[0]);
  }

  int first_column() const { return tokens_.front().column; }

 private:
  std::vector<Token> tokens_;
  int number_;
  int end_column_ = 1;
};

Quaternion quaternion(const std::vector<double>& v, std::size_t offset) {
  return {v[offset], v[offset + 1], v[offset + 2], v[offset + 3]};
}

template <class Matrix>
Matrix complex_matrix(const std::vector<double>& v, int n) {
  Matrix m;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = cplx(v[2 * (r * n + c)], v[2 * (r * n + c) + 1]);
  return m;
}

int bit(const LineParser& lp, int value, int column, const char* what) {
  if (value != 0 && value != 1) lp.fail(column, std::string(what) + " must be 0 or 1");
  return value;
}

s3s3::Isometry s3s3_translation(const LineParser& lp, const std::vector<double>& v,
                                const std::vector<int>& columns) {
  for (int s = 0; s < 3; ++s) {
    const Quaternion q = quaternion(v, 4 * s);
    if (std::abs(norm(q) - 1.0) > 1e-10) lp.fail(columns[s], "quaternion is not a unit quaternion");
  }
  return s3s3::Isometry::translation(quaternion(v, 0), quaternion(v, 4), quaternion(v, 8));
}

s3s3::Isometry parse_s3s3(const LineParser& lp) {
  const auto& toks = lp.tokens();
  const std::string& head = toks[0].text;
  if (head == "s3s3") {
    const auto [r, n] = lp.record(12, 2);
    const int kappa = bit(lp, n[0], toks[13].column, "kappa");
    if (n[1] < 0 || n[1] > 2) lp.fail(toks[14].column, "tau tag must be 0, 1 or 2");
    const s3s3::Isometry t = s3s3_translation(lp, r, {toks[1].column, toks[5].column, toks[9].column});
    return s3s3::iso_compose(s3s3::Isometry::psi(kappa, s3s3::rotation_from_tag(n[1])), t);
  }
  if (head == "translation") {
    const auto p = lp.params({"a", "b", "c"});
    std::vector<double> v;
    for (int s = 0; s < 3; ++s) {
      const auto q = lp.reals(p[s], 4, std::string(1, "abc"[s]));
      v.insert(v.end(), q.begin(), q.end());
    }
    return s3s3_translation(lp, v, {p[0].columns[0], p[1].columns[0], p[2].columns[0]});
  }
  if (head == "psi") {
    const auto p = lp.params({"kappa", "tau"});
    const int kappa = bit(lp, lp.single_int(p[0], "kappa"), p[0].columns[0], "kappa");
    const int tau = lp.single_int(p[1], "tau");
    if (tau < 0 || tau > 2) lp.fail(p[1].columns[0], "tau tag must be 0, 1 or 2");
    return s3s3::Isometry::psi(kappa, s3s3::rotation_from_tag(tau));
  }
  lp.fail(lp.first_column(), "unknown s3s3 generator '" + head + "'");
}

cp3::Isometry cp3_matrix(const LineParser& lp, const std::vector<double>& v, int column, int k) {
  const Mat4c a = complex_matrix<Mat4c>(v, 4);
  if (!group_membership(a, MatrixGroup::SymplecticUnitary, 1e-10)) lp.fail(column, "matrix is not in Sp(2)");
  return cp3::Isometry{a, k}.canonical();
}

cp3::Isometry parse_cp3(const LineParser& lp) {
  const auto& toks = lp.tokens();
  const std::string& head = toks[0].text;
  if (head == "cp3") {
    const auto [r, n] = lp.record(32, 1);
    return cp3_matrix(lp, r, toks[1].column, bit(lp, n[0], toks[33].column, "k"));
  }
  if (head == "sp2") {
    const auto p = lp.params({"m"});
    return cp3_matrix(lp, lp.reals(p[0], 32, "m"), p[0].columns[0], 0);
  }
  if (head == "conj") {
    if (toks.size() > 1) lp.fail(toks[1].column, "conj takes no parameters");
    return cp3::Isometry::conjugation();
  }
  lp.fail(lp.first_column(), "unknown cp3 generator '" + head + "'");
}

flag::Isometry flag_matrix(const LineParser& lp, const std::vector<double>& v, int column,
                           flag::Perm sigma, int k) {
  const Mat3c a = complex_matrix<Mat3c>(v, 3);
  if (!group_membership(a, MatrixGroup::SpecialUnitary, 1e-10)) lp.fail(column, "matrix is not in SU(3)");
  return flag::Isometry{a, sigma, k}.canonical();
}

flag::Perm permutation(const LineParser& lp, const std::vector<int>& v, int column) {
  const flag::Perm s{v[0], v[1], v[2]};
  if (!flag::perm_valid(s)) lp.fail(column, "not a permutation of 1, 2, 3");
  return s;
}

flag::Isometry parse_flag(const LineParser& lp) {
  const auto& toks = lp.tokens();
  const std::string& head = toks[0].text;
  if (head == "flag") {
    const auto [r, n] = lp.record(18, 4);
    const flag::Perm s = permutation(lp, {n[0], n[1], n[2]}, toks[19].column);
    return flag_matrix(lp, r, toks[1].column, s, bit(lp, n[3], toks[22].column, "k"));
  }
  if (head == "su3") {
    const auto p = lp.params({"m"});
    return flag_matrix(lp, lp.reals(p[0], 18, "m"), p[0].columns[0], {1, 2, 3}, 0);
  }
  if (head == "phi") {
    const auto p = lp.params({"index"});
    const int index = lp.single_int(p[0], "index");
    if (index < 0 || index > 5) lp.fail(p[0].columns[0], "phi index must be 0..5");
    return flag::Isometry::phi(index);
  }
  if (head == "perm") {
    const auto p = lp.params({"sigma"});
    if (p[0].values.size() != 3) lp.fail(p[0].columns[0], "sigma needs three entries");
    std::vector<int> v;
    for (int i = 0; i < 3; ++i) v.push_back(lp.integer(p[0].values[i], p[0].columns[i]));
    return {Mat3c::Identity(), permutation(lp, v, p[0].columns[0]), 0};
  }
  if (head == "conj") {
    if (toks.size() > 1) lp.fail(toks[1].column, "conj takes no parameters");
    return flag::Isometry::conjugation();
  }
  lp.fail(lp.first_column(), "unknown flag generator '" + head + "'");
}

}  // namespace

std::string format_element(const s3s3::Isometry& f) {
  std::ostringstream out;
  out << "s3s3";
  for (const Quaternion& q : {f.a, f.b, f.c})
    for (double v : q.coeffs()) put(out, v);
  out << ' ' << f.kappa << ' ' << static_cast<int>(f.tau);
  return out.str();
}

std::string format_element(const cp3::Isometry& f) {
  std::ostringstream out;
  out << "cp3";
  put_matrix(out, f.a);
  out << ' ' << f.k;
  return out.str();
}

std::string format_element(const flag::Isometry& f) {
  std::ostringstream out;
  out << "flag";
  put_matrix(out, f.a);
  out << ' ' << f.sigma[0] << ' ' << f.sigma[1] << ' ' << f.sigma[2] << ' ' << f.k;
  return out.str();
}

std::string format_element(const AnyIsometry& f) {
  return std::visit([](const auto& g) { return format_element(g); }, f);
}

AnyIsometry parse_composition(Space space, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  std::vector<AnyIsometry> chain;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const LineParser lp(line, number);
    if (lp.empty()) continue;
    const std::string& head = lp.tokens()[0].text;
    if ((head == "s3s3" || head == "cp3" || head == "flag") && head != to_string(space)) {
      lp.fail(lp.first_column(), "element of space '" + head + "' in a " + to_string(space) + " file");
    }
    switch (space) {
      case Space::S3S3: chain.emplace_back(parse_s3s3(lp)); break;
      case Space::CP3: chain.emplace_back(parse_cp3(lp)); break;
      case Space::Flag: chain.emplace_back(parse_flag(lp)); break;
    }
  }
  if (chain.empty()) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(number + 1) + ", column 1: no generators");
  }
  AnyIsometry total = chain.front();
  for (std::size_t i = 1; i < chain.size(); ++i) {
    total = std::visit(
        [&](const auto& acc) -> AnyIsometry {
          using T = std::decay_t<decltype(acc)>;
          const T& next = std::get<T>(chain[i]);
          if constexpr (std::is_same_v<T, s3s3::Isometry>) return s3s3::iso_compose(acc, next);
          if constexpr (std::is_same_v<T, cp3::Isometry>) return cp3::iso_compose_cp3(acc, next);
          if constexpr (std::is_same_v<T, flag::Isometry>) return flag::iso_compose_flag(acc, next);
        },
        total);
  }
  return total;
}

}  // namespace nkiso
