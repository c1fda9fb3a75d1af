#include <cmath>
#include <limits>

#include "doctest.h"
#include "fuzzyadapt/error.hpp"
#include "fuzzyadapt/linguistic.hpp"
#include "support.hpp"

using namespace fuzzyadapt;
using doctest::Approx;

namespace {

LinguisticVariable bandwidth() {
  return {"BandwidthRate",
          {0, 500, "Kbps"},
          {{"Low", MembershipFunction::triangular(0, 0, 200)},
           {"Mid", MembershipFunction::triangular(0, 250, 500)},
           {"High", MembershipFunction::triangular(300, 500, 500)}}};
}

LinguisticVariable satisfaction() {
  return {"SatisfactionDegree",
          {0, 1},
          {{"Low", MembershipFunction::triangular(0, 0, 0.4)},
           {"Mid", MembershipFunction::triangular(0, 0.5, 1)},
           {"High", MembershipFunction::triangular(0.6, 1, 1)}}};
}

LinguisticVariable data_size() {
  return {"DataSize",
          {100, 500, "KB"},
          {{"Small", MembershipFunction::trapezoidal(100, 100, 100, 300)},
           {"Mid", MembershipFunction::trapezoidal(200, 300, 300, 400)},
           {"Large", MembershipFunction::trapezoidal(300, 500, 500, 500)}}};
}

void check_triple(const FuzzifiedValue& fv, const char* a, double da, const char* b, double db, const char* c,
                  double dc) {
  REQUIRE(fv.degrees.size() == 3);
  CHECK(fv.degree(a) == Approx(da).epsilon(1e-12));
  CHECK(fv.degree(b) == Approx(db).epsilon(1e-12));
  CHECK(fv.degree(c) == Approx(dc).epsilon(1e-12));
}

}  // namespace

TEST_CASE("universe interval") {
  const UniverseInterval u(-2, 4, "m");
  CHECK(u.width() == 6);
  CHECK(u.mid() == 1);
  CHECK(u.clamp(10) == 4);
  CHECK(u.clamp(-10) == -2);
  CHECK(u.contains(4.0));
  CHECK_FALSE(u.contains(4.1));
  CHECK(u.contains(UniverseInterval(0, 1)));
  CHECK_THROWS_AS(UniverseInterval(1, 1), ValidationError);
  CHECK_THROWS_AS(UniverseInterval(2, 1), ValidationError);
}

TEST_CASE("fuzzify worked triples") {
  check_triple(fuzzify(bandwidth(), 400), "Low", 0, "Mid", 0.4, "High", 0.5);
  check_triple(fuzzify(satisfaction(), 0.8), "Low", 0, "Mid", 0.4, "High", 0.5);
  check_triple(fuzzify(data_size(), 350), "Small", 0, "Mid", 0.5, "Large", 0.25);
}

TEST_CASE("fuzzify clamps and flags") {
  const auto var = bandwidth();
  const auto in = fuzzify(var, 400);
  CHECK_FALSE(in.clamped);
  CHECK(in.crisp == 400);
  for (double delta : {0.001, 1.0, 1e6}) {
    const auto hi = fuzzify(var, 500 + delta);
    CHECK(hi.clamped);
    CHECK(hi.crisp == 500);
    const auto edge = fuzzify(var, 500);
    for (std::size_t i = 0; i < 3; ++i) CHECK(hi.degrees[i].degree == edge.degrees[i].degree);
  }
  CHECK(fuzzify(var, -5).crisp == 0);
  CHECK_THROWS_AS(fuzzify(var, std::nan("")), ValidationError);
  CHECK_THROWS_AS(in.degree("Huge"), ValidationError);
}

TEST_CASE("fuzzify produces one entry per term in order") {
  const auto var = testing::three_terms("x", 0, 10);
  const auto fv = fuzzify(var, 3);
  REQUIRE(fv.degrees.size() == var.term_count());
  for (std::size_t i = 0; i < var.term_count(); ++i) CHECK(fv.degrees[i].term == var.terms()[i].name);
  CHECK(fv.variable == "x");
}

TEST_CASE("variable construction rules") {
  CHECK_THROWS_AS(LinguisticVariable("x", {0, 1}, {}), ValidationError);
  CHECK_THROWS_AS(LinguisticVariable("", {0, 1}, {{"a", MembershipFunction::triangular(0, 0, 1)}}), ValidationError);
  CHECK_THROWS_AS(LinguisticVariable("x", {0, 1}, {{"", MembershipFunction::triangular(0, 0, 1)}}), ValidationError);
  const auto var = bandwidth();
  CHECK(var.term_index("Mid") == 1u);
  CHECK_FALSE(var.term_index("None").has_value());
}

TEST_CASE("validate_variable") {
  SUBCASE("worked softgoal terms cover the universe") {
    const auto r = validate_variable(satisfaction());
    CHECK(r.ok());
    CHECK_FALSE(r.has("coverage-gap"));
  }
  SUBCASE("gap on the upper half") {
    const LinguisticVariable var("x", {0, 1},
                                 {{"Low", MembershipFunction::triangular(0, 0, 0.25)},
                                  {"Mid", MembershipFunction::triangular(0, 0.25, 0.5)}});
    const auto r = validate_variable(var);
    CHECK(r.ok());
    REQUIRE(r.has("coverage-gap"));
    bool upper = false;
    for (const auto& i : r.issues())
      if (i.code == "coverage-gap" && i.message.find(", 1]") != std::string::npos) upper = true;
    CHECK(upper);
  }
  SUBCASE("duplicate term name") {
    const LinguisticVariable var("x", {0, 1},
                                 {{"Low", MembershipFunction::triangular(0, 0, 1)},
                                  {"Low", MembershipFunction::triangular(0, 1, 1)}});
    const auto r = validate_variable(var);
    CHECK_FALSE(r.ok());
    CHECK(r.has("duplicate-term"));
  }
  SUBCASE("support past the universe") {
    const LinguisticVariable var("x", {0, 1},
                                 {{"Low", MembershipFunction::triangular(-1, 0, 1)},
                                  {"High", MembershipFunction::triangular(0, 1, 1)}});
    CHECK(validate_variable(var).has("support-exceeds-universe"));
  }
}

TEST_CASE("bell fit") {
  const UniverseInterval u(0, 100);
  const auto lo = fit_bell(u, 0, 3), mid = fit_bell(u, 1, 3), hi = fit_bell(u, 2, 3);
  CHECK(lo.center == 0);
  CHECK(mid.center == 50);
  CHECK(hi.center == 100);
  CHECK(lo.slope == 2.0);
  // neighbours cross at 0.5 halfway between peaks
  const MembershipFunction a(lo), b(mid);
  CHECK(a(25) == Approx(0.5));
  CHECK(b(25) == Approx(0.5));
  CHECK_THROWS_AS(fit_bell(u, 3, 3), ValidationError);
}
