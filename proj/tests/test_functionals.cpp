#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <hardy/exponents.hpp>
#include <hardy/functionals.hpp>
#include <hardy/spaces.hpp>
#include <hardy/weights.hpp>

using namespace hardy;
using Catch::Approx;

namespace {

const double kA2Ref = 1.2909944487358056;   // sqrt(5/3)
const double kA1Ref = 1.8257418583505537;   // sqrt(10/3)
const double kProp2Lhs = 1.1774100225154747; // sqrt(2 log 2)
const double kProp1Rhs = 2.5819888974716113; // sqrt(20/3)

SpaceModel line() { return SpaceModel::homogeneous(1.0); }
RadialWeight ref_u() { return RadialWeight::piecewise_power(0.0, -2.0); }
RadialWeight ref_v() { return RadialWeight::power(0.0); }

std::string clause_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const precondition_error& e) {
    return e.clause();
  }
  return "<no precondition_error>";
}

} // namespace

TEST_CASE("characterizing integrals on the reference pair") {
  const ExponentConfig e = derive_exponents(2.0, 1.0);
  const FinitenessVerdict a2 = compute_A2(ref_u(), ref_v(), e, line());
  REQUIRE(a2.finite());
  CHECK(a2.origin == DivergenceOrigin::none);
  REQUIRE(a2.integral.has_value());
  CHECK(a2.integral->converged);
  CHECK(a2.integral->value == Approx(kA2Ref).epsilon(1e-9));

  const FinitenessVerdict a1 = compute_A1(ref_u(), ref_v(), e, line());
  REQUIRE(a1.finite());
  CHECK(a1.integral->converged);
  CHECK(a1.integral->value == Approx(kA1Ref).epsilon(1e-9));

  CHECK(lemma1_residual(ref_u(), ref_v(), e, line()) < 1e-8);
}

TEST_CASE("the two integrals stay locked together across configurations") {
  struct Config {
    double p, q;
    RadialWeight u, v;
    SpaceModel s;
  };
  const std::vector<Config> configs = {
      {2.0, 1.0, ref_u(), ref_v(), line()},
      {3.0, 1.5, RadialWeight::piecewise_power(0.0, -5.0), RadialWeight::power(4.0),
       SpaceModel::homogeneous(3.0)},
      {2.0, 1.0, RadialWeight::sinh_piecewise_power(0.0, -3.0),
       RadialWeight::sinh_power(1.0), SpaceModel::hyperbolic(2)},
      {2.5, 1.25, RadialWeight::piecewise_power(0.0, -3.0), ref_v(), line()},
  };
  for (const auto& c : configs) {
    const ExponentConfig e = derive_exponents(c.p, c.q);
    CHECK(lemma1_residual(c.u, c.v, e, c.s) < 1e-8);
  }
}

TEST_CASE("slowly decaying characterizing integrands are reported unconverged") {
  // with these exponents the reference u-weight leaves only t^-1.5 decay, so
  // the mass beyond the integration window exceeds the certification target;
  // the value must come back flagged rather than silently short
  const ExponentConfig e = derive_exponents(2.5, 1.25);
  const FinitenessVerdict a2 = compute_A2(ref_u(), ref_v(), e, line());
  REQUIRE(a2.finite());
  REQUIRE(a2.integral.has_value());
  CHECK_FALSE(a2.integral->converged);
  CHECK(a2.integral->abs_err > 1e-9 * a2.integral->value);
}

TEST_CASE("at the conjugate point the two integrals coincide exactly") {
  // q = p' makes the exchange identity collapse to equality of the values
  const ExponentConfig e = derive_exponents(3.0, 1.5);
  const SpaceModel h3 = SpaceModel::hyperbolic(3);
  const RadialWeight u = RadialWeight::sinh_piecewise_power(0.0, -5.0);
  const RadialWeight v = RadialWeight::sinh_power(2.0);
  const FinitenessVerdict a2 = compute_A2(u, v, e, h3);
  const FinitenessVerdict a1 = compute_A1(u, v, e, h3);
  REQUIRE(a2.finite());
  REQUIRE(a1.finite());
  CHECK(a2.integral->value == Approx(a1.integral->value).epsilon(1e-9));
}

TEST_CASE("divergence verdicts carry their origin") {
  const ExponentConfig e = derive_exponents(2.0, 1.0);

  const FinitenessVerdict bad_v =
      compute_A2(ref_u(), RadialWeight::power(2.0), e, line());
  CHECK(bad_v.kind == FinitenessClass::divergent_near_zero);
  CHECK(bad_v.origin == DivergenceOrigin::weight_v);
  CHECK_FALSE(bad_v.integral.has_value());

  const FinitenessVerdict bad_u =
      compute_A2(RadialWeight::piecewise_power(0.0, -0.5), ref_v(), e, line());
  CHECK(bad_u.kind == FinitenessClass::divergent_at_infinity);
  CHECK(bad_u.origin == DivergenceOrigin::weight_u);

  const FinitenessVerdict critical =
      compute_A2(RadialWeight::piecewise_power(0.0, -1.0), ref_v(), e, line());
  CHECK(critical.kind == FinitenessClass::indeterminate);
  CHECK(critical.origin == DivergenceOrigin::weight_u);

  // both weight hypotheses hold, yet the characterizing integrand blows up
  const FinitenessVerdict outer =
      compute_A2(RadialWeight::piecewise_power(-2.0, -2.0), ref_v(), e, line());
  CHECK(outer.kind == FinitenessClass::divergent_near_zero);
  CHECK(outer.origin == DivergenceOrigin::outer);

  CHECK(clause_of([&] {
          lemma1_residual(RadialWeight::piecewise_power(0.0, -0.5), ref_v(), e, line());
        }) == "finite A2");
}

TEST_CASE("the built witness matches its closed form on the reference pair") {
  // with p = 2, q = 1 the witness reduces to the outer u-mass itself
  const ExponentConfig e = derive_exponents(2.0, 1.0);
  const TestFunction f = build_near_extremal(ref_u(), ref_v(), e, line());
  CHECK_FALSE(f.nondecreasing());
  CHECK(f.at(0.25) == Approx(1.75).epsilon(1e-8));
  CHECK(f.at(0.5) == Approx(1.5).epsilon(1e-8));
  CHECK(f.at(2.0) == Approx(0.5).epsilon(1e-8));
  CHECK(f.at(100.0) == Approx(0.01).epsilon(1e-8));

  const double ratio = hardy_ratio(f, ref_u(), ref_v(), e, line());
  CHECK(ratio == Approx(kA1Ref).margin(1e-5));
}

TEST_CASE("the ratio is invariant under scaling the test function") {
  const ExponentConfig e = derive_exponents(2.0, 1.0);
  FunctionalOptions opt;
  opt.quad.abs_tol = 0.0;  // pure relative targets keep tiny scales honest
  const TestFunction f = TestFunction::power_bump(1.0, 1.0);
  const double base = hardy_ratio(f, ref_u(), ref_v(), e, line(), opt);
  for (double c : {1e-6, 1e6}) {
    const double scaled = hardy_ratio(f.scaled(c), ref_u(), ref_v(), e, line(), opt);
    CHECK(scaled == Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("no test function in a varied family beats the upper constant") {
  const ExponentConfig e = derive_exponents(2.0, 1.0);
  const FinitenessVerdict a2 = compute_A2(ref_u(), ref_v(), e, line());
  REQUIRE(a2.finite());
  const double cap = theorem_constants(e).upper_factor * a2.integral->value;

  std::vector<TestFunction> family = {
      TestFunction::power_bump(0.5, 0.5),
      TestFunction::power_bump(1.0, 1.0),
      TestFunction::power_bump(2.0, 1.0),
      TestFunction::power_bump(1.0, 2.0),
      TestFunction::power_bump(3.0, 0.7),
      TestFunction::exp_decay(0.5),
      TestFunction::exp_decay(1.0),
      TestFunction::exp_decay(2.0),
      TestFunction::custom([](double rho) { return -3.0 * std::log1p(rho); }),
      build_near_extremal(ref_u(), ref_v(), e, line()),
  };
  for (const TestFunction& f : family) {
    CAPTURE(f.kind());
    const double ratio = hardy_ratio(f, ref_u(), ref_v(), e, line());
    CHECK(ratio <= cap * (1.0 + 1e-3));
    CHECK(ratio > 0.0);
  }
}

TEST_CASE("the witness certifies the lower constant across geometries") {
  struct Config {
    double p, q;
    RadialWeight u, v;
    SpaceModel s;
  };
  const std::vector<Config> configs = {
      {2.0, 1.0, ref_u(), ref_v(), line()},
      {3.0, 1.5, RadialWeight::piecewise_power(0.0, -5.0), RadialWeight::power(4.0),
       SpaceModel::homogeneous(3.0)},
      {2.0, 1.0, RadialWeight::sinh_piecewise_power(0.0, -3.0),
       RadialWeight::sinh_power(1.0), SpaceModel::hyperbolic(2)},
  };
  for (const auto& c : configs) {
    const ExponentConfig e = derive_exponents(c.p, c.q);
    const FinitenessVerdict a2 = compute_A2(c.u, c.v, e, c.s);
    REQUIRE(a2.finite());
    const ConstantBracket bracket = theorem_constants(e);
    const TestFunction f = build_near_extremal(c.u, c.v, e, c.s);
    const double ratio = hardy_ratio(f, c.u, c.v, e, c.s);
    CHECK(ratio >= bracket.lower_factor * a2.integral->value * (1.0 - 1e-3));
    CHECK(ratio <= bracket.upper_factor * a2.integral->value * (1.0 + 1e-3));
  }
}

TEST_CASE("the full two-sided report on the reference pair") {
  const ExponentConfig e = derive_exponents(2.0, 1.0);
  const HardyReport rep = verify_sandwich(ref_u(), ref_v(), e, line());
  CHECK(rep.applicable);
  CHECK(rep.sandwich_ok);
  CHECK(rep.exponents.r == Approx(2.0));
  CHECK(rep.bracket.lower_factor == Approx(0.7071067811865475).epsilon(1e-12));
  CHECK(rep.bracket.upper_factor == Approx(2.8284271247461903).epsilon(1e-12));
  REQUIRE(rep.a2.finite());
  REQUIRE(rep.a1.finite());
  CHECK(rep.a2.integral->value == Approx(kA2Ref).epsilon(1e-9));
  CHECK(rep.a1.integral->value == Approx(kA1Ref).epsilon(1e-9));
  CHECK(rep.lemma1_residual < 1e-8);
  CHECK(rep.lower_bound == Approx(0.7071067811865475 * kA2Ref).epsilon(1e-9));
  CHECK(rep.upper_bound == Approx(2.8284271247461903 * kA2Ref).epsilon(1e-9));
  CHECK(rep.c_near_extremal >= rep.lower_bound * (1.0 - rep.tol));
  CHECK(rep.c_near_extremal <= rep.upper_bound * (1.0 + rep.tol));
  CHECK(rep.tol == 1e-3);
  CHECK(rep.wall_seconds > 0.0);
}

TEST_CASE("the report declines instead of guessing when hypotheses fail") {
  const ExponentConfig e = derive_exponents(2.0, 1.0);
  const HardyReport rep =
      verify_sandwich(ref_u(), RadialWeight::power(2.0), e, line());
  CHECK_FALSE(rep.applicable);
  CHECK_FALSE(rep.sandwich_ok);
  CHECK(rep.a2.kind == FinitenessClass::divergent_near_zero);
  CHECK(std::isnan(rep.lemma1_residual));
  CHECK(std::isnan(rep.lower_bound));
  CHECK(std::isnan(rep.c_near_extremal));
}

TEST_CASE("average bound on the line") {
  const InequalityCheck chk =
      check_prop2(TestFunction::exp_decay(1.0), RadialWeight::power(0.0), 2.0, line());
  CHECK(chk.lhs_class == FinitenessClass::finite);
  CHECK(chk.rhs_class == FinitenessClass::finite);
  CHECK(chk.lhs.value == Approx(kProp2Lhs).epsilon(1e-6));
  CHECK(chk.rhs.value == Approx(0.7071067811865475).epsilon(1e-9));
  CHECK(chk.ratio == Approx(kProp2Lhs / 0.7071067811865475).epsilon(1e-6));
  CHECK(chk.bound == Approx(2.0));
  CHECK(chk.ok);
  CHECK_FALSE(chk.vacuous);
}

TEST_CASE("average bound in the three-dimensional model") {
  const InequalityCheck chk = check_prop2(TestFunction::exp_decay(1.0),
                                          RadialWeight::power(0.0), 2.0,
                                          SpaceModel::homogeneous(3.0));
  CHECK(chk.rhs.value == Approx(0.5).epsilon(1e-9));
  CHECK(chk.ratio <= 2.0);
  CHECK(chk.ok);
}

TEST_CASE("a non-decaying function is flagged, not excused") {
  const InequalityCheck chk =
      check_prop2(TestFunction::constant(1.0), RadialWeight::power(0.0), 2.0, line());
  CHECK(chk.lhs_class == FinitenessClass::divergent_at_infinity);
  CHECK(chk.rhs_class == FinitenessClass::divergent_at_infinity);
  CHECK(std::isinf(chk.lhs.value));
  CHECK(std::isinf(chk.rhs.value));
  CHECK(chk.vacuous);
  CHECK_FALSE(chk.ok);
}

TEST_CASE("average bound rejects weights and functions outside its hypotheses") {
  const TestFunction f = TestFunction::exp_decay(1.0);
  CHECK(clause_of([&] {
          check_prop2(f, RadialWeight::piecewise_power(0.0, -2.0), 2.0, line());
        }) == "infinite total w-mass");
  CHECK(clause_of([&] {
          check_prop2(f, RadialWeight::power(-2.0), 2.0, line());
        }) == "finite local w-mass");
  CHECK(clause_of([&] {
          check_prop2(TestFunction::power_bump(-1.5, 1.0), RadialWeight::power(0.0),
                      2.0, line());
        }) == "locally integrable test function");
  CHECK(clause_of([&] {
          check_prop2(TestFunction::custom([](double) { return kNegInf; }),
                      RadialWeight::power(0.0), 2.0, line());
        }) == "nonzero p-energy");
  CHECK_THROWS_AS(check_prop2(f, RadialWeight::power(0.0), 1.0, line()), domain_error);
  CHECK_THROWS_AS(check_prop2(f, RadialWeight::power(0.0), kPosInf, line()),
                  domain_error);
}

TEST_CASE("monotone bound on the line") {
  const ExponentConfig e = derive_exponents(2.0, 1.0);
  const InequalityCheck chk = check_prop1(TestFunction::capped_power(1.0, 1.0),
                                          ref_u(), RadialWeight::power(-2.0), e, line());
  CHECK(chk.lhs_class == FinitenessClass::finite);
  CHECK(chk.rhs_class == FinitenessClass::finite);
  CHECK(chk.lhs.value == Approx(1.5).epsilon(1e-9));
  CHECK(chk.rhs.value == Approx(kProp1Rhs).epsilon(1e-6));
  CHECK(chk.bound == Approx(1.0));
  CHECK(chk.ok);
  CHECK_FALSE(chk.vacuous);
}

TEST_CASE("monotone bound across cap placements") {
  const ExponentConfig e = derive_exponents(2.0, 1.0);
  const RadialWeight b = RadialWeight::power(-2.0);

  const InequalityCheck low = check_prop1(TestFunction::capped_power(2.0, 0.5),
                                          ref_u(), b, e, line());
  CHECK(low.lhs.value == Approx(5.0 / 12.0).epsilon(1e-6));
  CHECK(low.ok);

  const InequalityCheck high = check_prop1(TestFunction::capped_power(1.5, 3.0),
                                           ref_u(), b, e, line());
  CHECK(high.lhs.value == Approx(3.0 * std::sqrt(3.0) - 1.6).epsilon(1e-6));
  CHECK(high.ok);
}

TEST_CASE("monotone bound vacuous and rejection paths") {
  const ExponentConfig e = derive_exponents(2.0, 1.0);
  const RadialWeight b = RadialWeight::power(-2.0);

  // a bounded nondecreasing function with infinite p-energy against b
  const InequalityCheck vac =
      check_prop1(TestFunction::constant(1.0), ref_u(), b, e, line());
  CHECK(vac.ok);
  CHECK(vac.vacuous);
  CHECK(std::isinf(vac.rhs.value));
  CHECK(vac.lhs.value == Approx(2.0).epsilon(1e-6));

  CHECK(clause_of([&] {
          check_prop1(TestFunction::capped_power(1.0, 1.0), ref_u(),
                      RadialWeight::piecewise_power(0.0, -2.0), e, line());
        }) == "infinite total b-mass");
  CHECK(clause_of([&] {
          check_prop1(TestFunction::capped_power(1.0, 1.0), ref_u(),
                      RadialWeight::power(-0.5), e, line());
        }) == "b integrable away from the origin");
  CHECK(clause_of([&] {
          check_prop1(TestFunction::capped_power(1.0, 1.0),
                      RadialWeight::piecewise_power(0.0, -0.5), b, e, line());
        }) == "DivergentU");
  CHECK_THROWS_AS(
      check_prop1(TestFunction::exp_decay(1.0), ref_u(), b, e, line()),
      domain_error);
}

TEST_CASE("test function construction and evaluation") {
  const TestFunction bump = TestFunction::power_bump(2.0, 1.5);
  CHECK(bump.at(0.5) == Approx(0.25));
  CHECK(bump.at(2.0) == 0.0);
  CHECK(bump.breakpoints() == std::vector<double>{1.5});
  CHECK_FALSE(bump.nondecreasing());
  CHECK(bump.kind() == "power_bump");

  const TestFunction capped = TestFunction::capped_power(2.0, 3.0);
  CHECK(capped.nondecreasing());
  CHECK(capped.at(2.0) == Approx(4.0));
  CHECK(capped.at(10.0) == Approx(9.0));
  CHECK_FALSE(TestFunction::capped_power(-1.0, 3.0).nondecreasing());

  CHECK(TestFunction::constant(2.5).at(17.0) == Approx(2.5));
  CHECK(TestFunction::constant(1.0).nondecreasing());
  CHECK(TestFunction::exp_decay(2.0).at(1.0) == Approx(std::exp(-2.0)));

  const TestFunction doubled = bump.scaled(2.0);
  CHECK(doubled.at(0.5) == Approx(0.5));
  CHECK(doubled.log_at(0.5) == Approx(std::log(0.25) + std::log(2.0)).margin(1e-12));

  CHECK_THROWS_AS(TestFunction::power_bump(1.0, 0.0), domain_error);
  CHECK_THROWS_AS(TestFunction::constant(0.0), domain_error);
  CHECK_THROWS_AS(TestFunction::exp_decay(0.0), domain_error);
  CHECK_THROWS_AS(TestFunction::capped_power(1.0, -1.0), domain_error);
  CHECK_THROWS_AS(TestFunction::custom(nullptr), domain_error);
  CHECK_THROWS_AS(bump.scaled(-1.0), domain_error);
  CHECK_THROWS_AS(bump.scaled(0.0), domain_error);
}

TEST_CASE("ratios reject test functions with critical energy") {
  const ExponentConfig e = derive_exponents(2.0, 1.0);
  CHECK(clause_of([&] {
          hardy_ratio(TestFunction::power_bump(-0.5, 1.0), ref_u(), ref_v(), e,
                      line());
        }) == "finite p-energy");
}
