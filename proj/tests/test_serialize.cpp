#include <doctest.h>

#include <string>

#include "nkiso/error.hpp"
#include "nkiso/serialize.hpp"

using namespace nkiso;

namespace {

std::string parse_message(Space space, const std::string& text) {
  try {
    parse_composition(space, text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("space names") {
  CHECK(parse_space("s3s3") == Space::S3S3);
  CHECK(parse_space("cp3") == Space::CP3);
  CHECK(parse_space("flag") == Space::Flag);
  CHECK_THROWS_AS(parse_space("s6"), Error);
}

TEST_CASE("element records round trip bit-exactly") {
  CounterRng rng(11);
  for (int i = 0; i < 50; ++i) {
    const s3s3::Isometry f = s3s3::random_isometry(rng);
    const auto g = std::get<s3s3::Isometry>(parse_composition(Space::S3S3, format_element(f)));
    CHECK(format_element(g) == format_element(f));
    CHECK(s3s3::distance(f, g) == 0.0);

    const cp3::Isometry a = cp3::random_isometry(rng);
    const auto b = std::get<cp3::Isometry>(parse_composition(Space::CP3, format_element(a)));
    CHECK(format_element(b) == format_element(a));

    const flag::Isometry u = flag::random_isometry(rng);
    const auto v = std::get<flag::Isometry>(parse_composition(Space::Flag, format_element(u)));
    CHECK(format_element(v) == format_element(u));
  }
}

TEST_CASE("s3s3 record layout") {
  const std::string rec = format_element(s3s3::Isometry::psi(1, s3s3::Rotation::FourThirds));
  CHECK(rec.rfind("s3s3 ", 0) == 0);
  CHECK(rec.substr(rec.size() - 4) == " 1 2");
}

TEST_CASE("composition order: the last line acts first") {
  const std::string text =
      "# psi after a translation\n"
      "psi kappa=1 tau=0\n"
      "translation a=0,1,0,0 b=1,0,0,0 c=0,0,1,0\n";
  const auto f = std::get<s3s3::Isometry>(parse_composition(Space::S3S3, text));
  const s3s3::Isometry expected =
      s3s3::iso_compose(s3s3::Isometry::psi(1, s3s3::Rotation::Zero),
                        s3s3::Isometry::translation(Quaternion{0, 1, 0, 0}, Quaternion::one(), Quaternion{0, 0, 1, 0}));
  CHECK(s3s3::distance(f, expected) <= 1e-15);

  const auto g = std::get<flag::Isometry>(parse_composition(Space::Flag, "phi index=1\nconj\nperm sigma=2,3,1\n"));
  const flag::Isometry h = flag::iso_compose_flag(
      flag::Isometry::phi(1), flag::iso_compose_flag(flag::Isometry::conjugation(),
                                                     flag::Isometry{Mat3c::Identity(), {2, 3, 1}, 0}));
  CHECK(flag::distance(g, h) <= 1e-15);

  const auto c = std::get<cp3::Isometry>(parse_composition(Space::CP3, "conj\nconj\n"));
  CHECK(cp3::distance(c, cp3::Isometry::identity()) == 0.0);
}

TEST_CASE("parse errors carry line and column") {
  CHECK(parse_message(Space::S3S3, "psi kappa=1 tau=0\npsi kappa=3 tau=0\n").find("line 2") != std::string::npos);
  const std::string bad_token = parse_message(Space::S3S3, "psi kappa=1 tau=0\n  twist angle=1\n");
  CHECK(bad_token.find("line 2, column 3") != std::string::npos);
  CHECK(parse_message(Space::Flag, "su3 m=1,0,0\n").find("line 1") != std::string::npos);
  CHECK(parse_message(Space::CP3, "").find("no generators") != std::string::npos);
  CHECK(parse_message(Space::S3S3, "translation a=2,0,0,0 b=1,0,0,0 c=1,0,0,0\n").find("line 1") !=
        std::string::npos);
  CHECK(parse_message(Space::Flag, "perm sigma=1,1,2\n").find("line 1") != std::string::npos);
  CHECK(parse_message(Space::Flag, "phi index=nan\n").find("line 1") != std::string::npos);
  // A record for another space is rejected.
  CHECK(parse_message(Space::Flag, format_element(s3s3::Isometry::identity())).find("line 1") != std::string::npos);
}

TEST_CASE("non-group matrices are rejected") {
  std::string m = "su3 m=";
  for (int i = 0; i < 9; ++i) m += std::string(i ? "," : "") + (i % 4 == 0 ? "2,0" : "0,0");
  CHECK(parse_message(Space::Flag, m + "\n").find("line 1") != std::string::npos);
}
