#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <random>

#include "biharm/interval.hpp"

using namespace biharm;
using HP = boost::multiprecision::cpp_bin_float_50;

namespace {

bool inside(const Interval& x, const HP& v) { return HP(x.lo()) <= v && v <= HP(x.hi()); }

double ulp(double x) { return std::nextafter(std::abs(x), INFINITY) - std::abs(x); }

Interval random_interval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10, 10), w(0, 2);
  std::uniform_int_distribution<int> e(-20, 20);
  const double a = std::ldexp(u(rng), e(rng) / 4);
  if (rng() % 4 == 0) return Interval(a);
  return {a, a + w(rng) * std::max(1e-6, std::abs(a))};
}

double pick(std::mt19937_64& rng, const Interval& x) {
  std::uniform_real_distribution<double> t(0, 1);
  const double v = x.lo() + t(rng) * (x.hi() - x.lo());
  return std::min(std::max(v, x.lo()), x.hi());
}

}  // namespace

TEST_CASE("construction") {
  CHECK_THROWS(Interval(2, 1));
  CHECK_THROWS(Interval(NAN, 1));
  CHECK(Interval(3).is_point());
}

TEST_CASE("arithmetic examples") {
  CHECK(Interval(1, 2) * Interval(-1, 3) == Interval(-2, 6));
  CHECK(Interval(1, 2) + Interval(3, 4) == Interval(4, 6));
  CHECK(Interval(1, 2) - Interval(3, 4) == Interval(-3, -1));
  CHECK(sqr(Interval(-1, 2)) == Interval(0, 4));
  CHECK(pow(Interval(-2, 1), 3) == Interval(-8, 1));
  CHECK(pow(Interval(-2, 1), 2) == Interval(0, 4));
  CHECK_THROWS_AS(Interval(1) / Interval(-1, 1), std::domain_error);
  CHECK_THROWS_AS(Interval(1) / Interval(0), std::domain_error);
  CHECK_THROWS_AS(intersect(Interval(0, 1), Interval(2, 3)), std::domain_error);
  CHECK(hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3));
}

TEST_CASE("pi enclosure") {
  const Interval p = pi_interval();
  CHECK(inside(p, boost::math::constants::pi<HP>()));
  CHECK(p.hi() == std::nextafter(p.lo(), 4.0));
  CHECK(inside(sqrt6_interval(), boost::multiprecision::sqrt(HP(6))));
}

TEST_CASE("sin and cos examples") {
  const Interval s = sin(Interval(0.0, pi_interval().hi()));
  CHECK(s.contains(Interval(0, 1)));
  CHECK(s.lo() <= 0.0);
  CHECK(cos(Interval(1.0)).contains(0.5403023058681398));
  // Extrema inside the argument.
  CHECK(sin(Interval(1.5, 1.7)).hi() >= 1.0);
  CHECK(cos(Interval(3.0, 3.3)).lo() <= -1.0);
  CHECK(cos(Interval(-0.1, 0.1)).hi() >= 1.0);
  CHECK(sin(Interval(4.6, 4.8)).lo() <= -1.0);
  CHECK(sin(Interval(-100, 100)).contains(Interval(-1, 1)));
  // The two-ulp widening keeps point images tight.
  const Interval c = cos(Interval(1.0));
  CHECK(c.hi() - c.lo() <= 4 * ulp(c.hi()));
}

TEST_CASE("containment fuzzing against 50-digit arithmetic") {
  std::mt19937_64 rng(12);
  long bad = 0;
  for (int i = 0; i < 1000000; ++i) {
    const Interval a = random_interval(rng), b = random_interval(rng);
    const double x = pick(rng, a), y = pick(rng, b);
    const HP X(x), Y(y);
    bad += !inside(a + b, X + Y);
    bad += !inside(a - b, X - Y);
    bad += !inside(a * b, X * Y);
    if (!b.contains_zero()) bad += !inside(a / b, X / Y);
    bad += !inside(pow(a, 3), X * X * X);
    bad += !inside(sqr(a), X * X);
    if (a.lo() >= 0) bad += !inside(sqrt(a), boost::multiprecision::sqrt(X));
    if (i % 4 == 0) {
      bad += !inside(sin(a), boost::multiprecision::sin(X));
      bad += !inside(cos(a), boost::multiprecision::cos(X));
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("directed rounding brackets the exact result within one ulp") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 100000; ++i) {
    const double a = u(rng), b = u(rng);
    const HP ea = HP(a) + HP(b), em = HP(a) * HP(b), ed = HP(a) / HP(b);
    CHECK(HP(rnd::add_down(a, b)) <= ea);
    CHECK(HP(rnd::add_up(a, b)) >= ea);
    CHECK(HP(rnd::mul_down(a, b)) <= em);
    CHECK(HP(rnd::mul_up(a, b)) >= em);
    CHECK(HP(rnd::div_down(a, b)) <= ed);
    CHECK(HP(rnd::div_up(a, b)) >= ed);
    CHECK(rnd::mul_up(a, b) - rnd::mul_down(a, b) <= ulp(a * b));
    CHECK(rnd::add_up(a, b) - rnd::add_down(a, b) <= ulp(a + b));
  }
  // Exact operations stay exact.
  CHECK(rnd::add_down(0.5, 0.25) == 0.75);
  CHECK(rnd::add_up(0.5, 0.25) == 0.75);
  CHECK(rnd::mul_down(3.0, 0.5) == 1.5);
}

TEST_CASE("box helpers") {
  const Box b{Interval(0, 1), Interval(0, 4)};
  CHECK(b.widest() == 1);
  CHECK(b.max_width() == 4.0);
  const auto [l, r] = b.bisect();
  CHECK(l[1] == Interval(0, 2));
  CHECK(r[1] == Interval(2, 4));
  CHECK(b.contains(l));
  CHECK(b.contains(r));
  CHECK(b.center()[0] == Interval(0.5));
}
