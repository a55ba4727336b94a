#include "biharm/interval_cert.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace biharm {

std::string to_string(TaskId t) { return "V" + std::to_string(static_cast<int>(t)); }

TaskId parse_task_id(const std::string& s) {
  if (s.size() == 2 && (s[0] == 'V' || s[0] == 'v') && s[1] >= '1' && s[1] <= '9') {
    return static_cast<TaskId>(s[1] - '0');
  }
  throw std::invalid_argument("unknown task id: " + s);
}

std::vector<TaskId> all_tasks() {
  std::vector<TaskId> v;
  for (int i = 1; i <= 9; ++i) v.push_back(static_cast<TaskId>(i));
  return v;
}

double default_min_width(TaskId t) {
  return (t == TaskId::V8 || t == TaskId::V9) ? defaults::kMinWidthCoarse : defaults::kMinWidth;
}

std::string to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Proved: return "Proved";
    case CertStatus::Failed: return "Failed";
    case CertStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

CertStatus worst(CertStatus a, CertStatus b) {
  auto rank = [](CertStatus s) { return s == CertStatus::Failed ? 2 : s == CertStatus::Inconclusive ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

void merge_into(Certificate& acc, const Certificate& part) {
  acc.regions.insert(acc.regions.end(), part.regions.begin(), part.regions.end());
  const CertStatus before = acc.status;
  acc.status = worst(acc.status, part.status);
  if (part.witness && (!acc.witness || (before != CertStatus::Failed && part.status == CertStatus::Failed))) {
    acc.witness = part.witness;
  }
  acc.boxes_examined += part.boxes_examined;
  acc.max_depth = std::max(acc.max_depth, part.max_depth);
  if (part.certified_min) {
    acc.certified_min = acc.certified_min ? std::min(*acc.certified_min, *part.certified_min) : *part.certified_min;
  }
}

int default_threads() {
  if (const char* env = std::getenv("BIHARM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

Interval nested_eval(const BoxFunction& f, const Box& b, const Interval& parent) {
  const Interval y = f(b);
  // Both contain the true range, so they overlap unless f is unsound.
  if (y.hi() < parent.lo() || parent.hi() < y.lo()) throw std::logic_error("enclosure disjoint from its parent");
  return {std::max(y.lo(), parent.lo()), std::min(y.hi(), parent.hi())};
}

namespace {

struct Partial {
  CertStatus status = CertStatus::Proved;
  std::optional<Box> witness;
  long boxes = 0;
  int max_depth = 0;
  double certified_min = std::numeric_limits<double>::infinity();
};

struct Node {
  Box box;
  int depth;
  Interval parent;
};

Partial search(const BoxFunction& f, const Box& root, int depth0, double bound, double min_width) {
  Partial out;
  const Interval whole(-std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  std::vector<Node> stack{{root, depth0, whole}};
  while (!stack.empty()) {
    auto [b, depth, parent] = std::move(stack.back());
    stack.pop_back();
    ++out.boxes;
    out.max_depth = std::max(out.max_depth, depth);
    const Interval y = nested_eval(f, b, parent);
    if (y.lo() >= bound) {
      out.certified_min = std::min(out.certified_min, y.lo());
      continue;
    }
    if (f(b.center()).hi() < bound) {
      out.status = CertStatus::Failed;
      out.witness = b;
      return out;
    }
    if (b.max_width() < min_width) {
      if (out.status == CertStatus::Proved) {
        out.status = CertStatus::Inconclusive;
        out.witness = b;
      }
      continue;
    }
    auto [lo, hi] = b.bisect();
    stack.push_back({std::move(hi), depth + 1, y});
    stack.push_back({std::move(lo), depth + 1, y});
  }
  return out;
}

// Deterministic root split: depth-limited bisection without evaluation.
std::vector<std::pair<Box, int>> split_root(const Box& box, int depth, double min_width) {
  std::vector<std::pair<Box, int>> frontier{{box, 0}};
  for (int level = 0; level < depth; ++level) {
    std::vector<std::pair<Box, int>> next;
    for (auto& [b, d] : frontier) {
      if (b.max_width() < min_width) {
        next.emplace_back(b, d);
        continue;
      }
      auto [lo, hi] = b.bisect();
      next.emplace_back(std::move(lo), d + 1);
      next.emplace_back(std::move(hi), d + 1);
    }
    frontier = std::move(next);
  }
  return frontier;
}

}  // namespace

Certificate prove_lower_bound(const BoxFunction& f, const Box& box, double bound, double min_width,
                              const BnbOptions& opt) {
  if (!(min_width > 0.0)) throw std::invalid_argument("min_width must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const auto frontier = split_root(box, std::max(0, opt.split_depth), min_width);
  std::vector<Partial> parts(frontier.size());
  const int nthreads = std::clamp(opt.threads > 0 ? opt.threads : default_threads(), 1,
                                  static_cast<int>(frontier.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= frontier.size()) return;
      try {
        parts[i] = search(f, frontier[i].first, frontier[i].second, bound, min_width);
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  Certificate cert;
  cert.min_width = min_width;
  cert.target = "lower bound " + std::to_string(bound);
  double cmin = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    const CertStatus before = cert.status;
    cert.status = worst(cert.status, p.status);
    if (p.witness && (!cert.witness || (before != CertStatus::Failed && p.status == CertStatus::Failed))) {
      cert.witness = p.witness;
    }
    cert.boxes_examined += p.boxes;
    cert.max_depth = std::max(cert.max_depth, p.max_depth);
    cmin = std::min(cmin, p.certified_min);
  }
  if (cert.status == CertStatus::Proved && std::isfinite(cmin)) cert.certified_min = cmin;
  cert.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return cert;
}

// ---------------------------------------------------------------- Taylor

Interval TaylorEnclosure::eval(const Interval& x) const {
  Interval acc(0.0);
  for (int k = degree; k >= 0; --k) acc = acc * x + coefficients[k];
  return acc + remainder * pow(x, degree + 1);
}

Interval TaylorEnclosure::remainder_bound() const { return remainder * pow(domain, degree + 1); }

namespace {
Interval inv_factorial(int n) {
  Interval f(1.0);
  for (int i = 2; i <= n; ++i) f *= Interval(static_cast<double>(i));
  return Interval(1.0) / f;
}

// -cos(xi) for xi in [0, umax]: [-1, -cos(umax)].
Interval neg_cos_range(double umax) { return Interval(-1.0, -cos(Interval(umax)).lo()); }
}  // namespace

TaylorEnclosure sin_taylor(const Interval& domain) {
  if (domain.lo() < 0.0 || domain.hi() > pi_interval().lo() / 2) {
    throw std::invalid_argument("sin_taylor domain must lie in [0, pi/2]");
  }
  TaylorEnclosure t;
  t.degree = 6;
  t.domain = domain;
  t.coefficients = {0.0, 1.0, 0.0, -inv_factorial(3), 0.0, inv_factorial(5), 0.0};
  t.remainder = neg_cos_range(domain.hi()) * inv_factorial(7);
  return t;
}

TaylorEnclosure cos_taylor(const Interval& domain) {
  if (domain.lo() < -pi_interval().lo() / 2 || domain.hi() > pi_interval().lo() / 2) {
    throw std::invalid_argument("cos_taylor domain must lie in [-pi/2, pi/2]");
  }
  TaylorEnclosure t;
  t.degree = 5;
  t.domain = domain;
  t.coefficients = {1.0, 0.0, -inv_factorial(2), 0.0, inv_factorial(4), 0.0};
  t.remainder = neg_cos_range(domain.mag()) * inv_factorial(6);
  return t;
}

namespace {

// a + b sqrt(6), each part an interval.
struct Q6 {
  Interval a{0.0};
  Interval b{0.0};
  bool is_zero() const { return a == Interval(0.0) && b == Interval(0.0); }
};

Q6 operator+(const Q6& x, const Q6& y) { return {x.a + y.a, x.b + y.b}; }
Q6 operator*(const Q6& x, const Q6& y) {
  return {x.a * y.a + Interval(6.0) * x.b * y.b, x.a * y.b + x.b * y.a};
}

// Polynomial in (phi0, phi) with Q6 coefficients.
constexpr int kDeg = 16;
struct Poly {
  std::array<std::array<Q6, kDeg>, kDeg> c{};

  static Poly constant(const Q6& q) {
    Poly p;
    p.c[0][0] = q;
    return p;
  }
  static Poly rational(double v) { return constant({Interval(v), Interval(0.0)}); }
};

Poly operator+(const Poly& x, const Poly& y) {
  Poly r;
  for (int i = 0; i < kDeg; ++i)
    for (int j = 0; j < kDeg; ++j) r.c[i][j] = x.c[i][j] + y.c[i][j];
  return r;
}

Poly operator*(const Poly& x, const Poly& y) {
  Poly r;
  for (int i = 0; i < kDeg; ++i) {
    for (int j = 0; j < kDeg; ++j) {
      if (x.c[i][j].is_zero()) continue;
      for (int p = 0; p < kDeg; ++p) {
        for (int q = 0; q < kDeg; ++q) {
          if (y.c[p][q].is_zero()) continue;
          if (i + p >= kDeg || j + q >= kDeg) throw std::logic_error("Taylor polynomial degree overflow");
          r.c[i + p][j + q] = r.c[i + p][j + q] + x.c[i][j] * y.c[p][q];
        }
      }
    }
  }
  return r;
}

Poly operator-(const Poly& x, const Poly& y) { return x + Poly::rational(-1.0) * y; }

Poly monomial(int var, int power, const Interval& coef) {
  Poly p;
  (var == 0 ? p.c[power][0] : p.c[0][power]) = {coef, Interval(0.0)};
  return p;
}

// f(k x) expanded in the variable x in [0, xmax] from its enclosure in u = k x.
Poly expand(const TaylorEnclosure& t, int var, double k) {
  Poly p;
  Interval kp(1.0);
  for (int m = 0; m <= t.degree; ++m) {
    if (!(t.coefficients[m] == Interval(0.0))) p = p + monomial(var, m, t.coefficients[m] * kp);
    kp *= Interval(k);
  }
  return p + monomial(var, t.degree + 1, t.remainder * kp);
}

Poly sin_k(int var, double k, double xmax) { return expand(sin_taylor(Interval(0.0, (Interval(k) * xmax).hi())), var, k); }
Poly cos_k(int var, double k, double xmax) { return expand(cos_taylor(Interval(0.0, (Interval(k) * xmax).hi())), var, k); }

Interval to_interval(const Q6& q) { return q.a + q.b * sqrt6_interval(); }

}  // namespace

CoeffEnclosure taylor_enclose_P_coeff(PCoeff which, const Box& box) {
  if (box.size() != 2) throw std::invalid_argument("taylor_enclose_P_coeff needs a 2-dimensional box");
  const double xmax = which == PCoeff::V0 ? 0.01 : 0.11;
  const double ymax = which == PCoeff::V0 ? 0.021 : 0.0006;
  if (box[0].lo() < 0.0 || box[1].lo() < 0.0 || box[0].hi() > xmax || box[1].hi() > ymax) {
    throw std::invalid_argument("box outside the domain of the Taylor enclosure");
  }
  const double X = box[0].hi(), Y = box[1].hi();
  const Poly x = monomial(0, 1, 1.0), y = monomial(1, 1, 1.0);
  const Poly dp = y - x;
  const Poly r6 = Poly::constant({Interval(0.0), Interval(1.0)});
  Poly p;
  if (which == PCoeff::V0) {
    const Poly m = Poly::rational(4.0) * cos_k(1, 2.0, Y) + Poly::rational(9.0);
    p = Poly::rational(-12.0) * sin_k(0, 2.0, X) - Poly::rational(12.0) * (dp + sin_k(1, 2.0, Y)) +
        Poly::rational(2.0) * r6 * m * (dp * cos_k(0, 1.0, X) + sin_k(0, 1.0, X)) -
        Poly::rational(12.0) * dp * cos_k(0, 2.0, X);
  } else {
    p = Poly::rational(12.0) * r6 * (sin_k(0, 1.0, X) + dp * cos_k(0, 1.0, X)) -
        Poly::rational(4.0) * sin_k(1, 2.0, Y);
  }
  // Terms of degree < 3 in phi0 alone cancel exactly; everything else is
  // absorbed into the phi0^3 or phi coefficient over the box.
  for (int i = 0; i < 3; ++i) {
    if (!p.c[i][0].is_zero()) throw std::logic_error("unexpected low-order phi0 term in Taylor expansion");
  }
  Interval c3(0.0), c1(0.0);
  for (int i = 0; i < kDeg; ++i) {
    for (int j = 0; j < kDeg; ++j) {
      if (p.c[i][j].is_zero()) continue;
      const Interval coef = to_interval(p.c[i][j]);
      if (j == 0) {
        c3 += coef * pow(box[0], i - 3);
      } else {
        c1 += coef * pow(box[0], i) * pow(box[1], j - 1);
      }
    }
  }
  return {c3, c1};
}

// ---------------------------------------------------------------- sublevel

namespace {

struct SublevelSearch {
  const BoxFunction& f;
  double threshold;
  double D;
  int refine;
  SublevelStats stats;
  long imin = std::numeric_limits<long>::max(), imax = -1, jmin = std::numeric_limits<long>::max(), jmax = -1;

  Box cell_box(long i0, long i1, long j0, long j1) const {
    return Box{Interval(i0 / D, i1 / D), Interval(j0 / D, j1 / D)};
  }

  bool excluded(const Box& b, int levels) {
    ++stats.boxes_examined;
    if (f(b).lo() > threshold) return true;
    if (levels == 0) return false;
    const double xm = b[0].mid(), ym = b[1].mid();
    const Box q[4] = {{Interval(b[0].lo(), xm), Interval(b[1].lo(), ym)},
                      {Interval(xm, b[0].hi()), Interval(b[1].lo(), ym)},
                      {Interval(b[0].lo(), xm), Interval(ym, b[1].hi())},
                      {Interval(xm, b[0].hi()), Interval(ym, b[1].hi())}};
    for (const auto& c : q) {
      if (!excluded(c, levels - 1)) return false;
    }
    return true;
  }

  void run(long i0, long i1, long j0, long j1, int depth) {
    // Nothing inside the current bounding box can enlarge it.
    if (imax >= 0 && i0 >= imin && i1 - 1 <= imax && j0 >= jmin && j1 - 1 <= jmax) return;
    stats.max_depth = std::max(stats.max_depth, depth);
    ++stats.boxes_examined;
    if (f(cell_box(i0, i1, j0, j1)).lo() > threshold) return;
    if (i1 - i0 == 1 && j1 - j0 == 1) {
      if (!excluded(cell_box(i0, i1, j0, j1), refine)) {
        imin = std::min(imin, i0);
        imax = std::max(imax, i0);
        jmin = std::min(jmin, j0);
        jmax = std::max(jmax, j0);
      }
      return;
    }
    if (i1 - i0 >= j1 - j0) {
      const long im = i0 + (i1 - i0) / 2;
      run(i0, im, j0, j1, depth + 1);
      run(im, i1, j0, j1, depth + 1);
    } else {
      const long jm = j0 + (j1 - j0) / 2;
      run(i0, i1, j0, jm, depth + 1);
      run(i0, i1, jm, j1, depth + 1);
    }
  }
};

long grid_index(double x, double D) {
  const double v = x * D;
  if (v != std::floor(v)) throw std::invalid_argument("domain endpoint is not a multiple of 1/denominator");
  return static_cast<long>(v);
}

}  // namespace

std::optional<Box> enclose_sublevel(const BoxFunction& f, const Box& domain, double threshold, long denominator,
                                    int refine, SublevelStats* stats) {
  if (domain.size() != 2) throw std::invalid_argument("enclose_sublevel needs a 2-dimensional domain");
  if (denominator <= 0 || (denominator & (denominator - 1)) != 0) {
    throw std::invalid_argument("denominator must be a power of two");
  }
  const double D = static_cast<double>(denominator);
  SublevelSearch s{f, threshold, D, refine, {}};
  s.run(grid_index(domain[0].lo(), D), grid_index(domain[0].hi(), D), grid_index(domain[1].lo(), D),
        grid_index(domain[1].hi(), D), 0);
  if (stats) *stats = s.stats;
  if (s.imax < 0) return std::nullopt;
  return s.cell_box(s.imin, s.imax + 1, s.jmin, s.jmax + 1);
}

// ---------------------------------------------------------------- functions

namespace {

template <class T>
T lift(double v) {
  return T(Interval(v));
}

template <class T>
T fn_c0(const T& s, const T& p) {
  const T r6(sqrt6_interval());
  const T m = lift<T>(4.0) * cos(lift<T>(2.0) * p) + lift<T>(9.0);
  const T dp = p - s;
  return lift<T>(-12.0) * sin(lift<T>(2.0) * s) - lift<T>(12.0) * (dp + sin(lift<T>(2.0) * p)) +
         lift<T>(2.0) * r6 * m * (dp * cos(s) + sin(s)) - lift<T>(12.0) * dp * cos(lift<T>(2.0) * s);
}

template <class T>
T fn_c1(const T& s, const T& p) {
  const T r6(sqrt6_interval());
  return lift<T>(4.0) * cos(lift<T>(2.0) * p) - lift<T>(4.0) * r6 * cos(s) + lift<T>(10.0);
}

template <class T>
T fn_c2(const T& s, const T& p) {
  const T r6(sqrt6_interval());
  return lift<T>(12.0) * r6 * (sin(s) + (p - s) * cos(s)) - lift<T>(4.0) * sin(lift<T>(2.0) * p);
}

template <class T>
T fn_phi_of_z(const T& s, const T& z) {
  return s + z * cos(s) / (lift<T>(1.0) + sin(s));
}

template <class T>
T fn_coeff(int k, const T& s, const T& p) {
  switch (k) {
    case 0: return fn_c0(s, p);
    case 1: return fn_c1(s, p);
    case 2: return fn_c2(s, p);
  }
  throw std::invalid_argument("P coefficient index must be 0, 1 or 2");
}

template <class T>
T fn_q0(const T& x) {
  return lift<T>(6.0) * (lift<T>(3.0) * x - lift<T>(2.0) * sin(lift<T>(2.0) * x) +
                         lift<T>(2.0) * x * cos(lift<T>(2.0) * x));
}

template <class T>
T fn_a0(const T& s, const T& p) {
  const T r6(sqrt6_interval());
  return lift<T>(4.0) * cos(lift<T>(2.0) * p) - lift<T>(2.0) * r6 * cos(s) + lift<T>(9.0);
}

// Natural extension intersected with the centered form. Where the gradient
// enclosure has a fixed sign the range is taken from the two opposite faces.
template <class Fn>
Interval enclose(const Fn& fn, const Box& b) {
  const bool two = b.size() > 1;
  const Interval nat = two ? fn(b[0], b[1]) : fn(b[0], Interval(0.0));
  auto series_fn = [&](const Series2& x, const Series2& y) { return fn(x, y); };
  const Series2 at_x = expand_on(series_fn, b, false);
  for (std::size_t k = 0; k < b.size(); ++k) {
    const Interval grad = k == 0 ? at_x(1, 0) : at_x(0, 1);
    if (b[k].is_point() || grad.contains_zero()) continue;
    Box lo_face = b, hi_face = b;
    lo_face[k] = Interval(b[k].lo());
    hi_face[k] = Interval(b[k].hi());
    const Interval r = grad.lo() > 0.0 ? Interval(enclose(fn, lo_face).lo(), enclose(fn, hi_face).hi())
                                       : Interval(enclose(fn, hi_face).lo(), enclose(fn, lo_face).hi());
    return intersect(nat, r);
  }
  return intersect(nat, centered_form(expand_on(series_fn, b, true), at_x, b));
}

template <class Fn>
BoxFunction tight(Fn fn) {
  return [fn](const Box& b) { return enclose(fn, b); };
}

}  // namespace

BoxFunction p_coeff_phi(int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("P coefficient index must be 0, 1 or 2");
  return tight([k](const auto& s, const auto& p) { return fn_coeff(k, s, p); });
}

BoxFunction p_coeff_z(int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("P coefficient index must be 0, 1 or 2");
  return tight([k](const auto& s, const auto& z) { return fn_coeff(k, s, fn_phi_of_z(s, z)); });
}

BoxFunction quadratic_min_z() {
  auto c0 = p_coeff_z(0), c1 = p_coeff_z(1), c2 = p_coeff_z(2);
  return [c0, c1, c2](const Box& b) {
    const Interval a = c0(b), k1 = c1(b), k2 = c2(b);
    if (k2.lo() <= 0.0) return Interval(-1e300, 1e300);
    // min over v >= 0 of a + k1 v + k2 v^2 is a - min(k1, 0)^2 / (4 k2).
    const Interval neg = min(k1, Interval(0.0));
    return a - sqr(neg) / (Interval(4.0) * k2);
  };
}

BoxFunction q_constant_term() {
  return tight([](const auto& x, const auto&) { return fn_q0(x); });
}

BoxFunction a_without_v() {
  return tight([](const auto& s, const auto& p) { return fn_a0(s, p); });
}

Box reference_box_A() { return Box{Interval(0.0, 783.0 / 1024.0), Interval(779.0 / 1024.0, 1.0)}; }

// ---------------------------------------------------------------- tasks

Certificate run_task(TaskId id, std::optional<double> min_width, const BnbOptions& opt) {
  const double w = min_width.value_or(default_min_width(id));
  if (!(w > 0.0)) throw std::invalid_argument("min_width must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const Interval pi = pi_interval();
  const double half_pi = pi.hi() * 0.5;  // upper endpoints round up

  Certificate cert;
  cert.task = id;
  cert.min_width = w;

  auto bnb = [&](const BoxFunction& f, const Box& box, const std::string& coords, double bound) {
    Certificate c = prove_lower_bound(f, box, bound, w, opt);
    c.regions = {{coords, box}};
    merge_into(cert, c);
  };
  auto taylor = [&](PCoeff which, const Box& box) {
    const CoeffEnclosure e = taylor_enclose_P_coeff(which, box);
    cert.taylor = e;
    cert.regions.push_back({"(phi0,phi)", box});
    if (!(e.phi0_cubed.lo() > 0.0 && e.phi.lo() > 0.0)) {
      cert.status = CertStatus::Failed;
      if (!cert.witness) cert.witness = box;
    }
  };

  switch (id) {
    case TaskId::V1:
      cert.target = "a >= 4cos(2phi) - 2sqrt(6)cos(phi0) + 9 >= 0.1 (6v^2 >= 0 dropped)";
      bnb(a_without_v(), Box{Interval(0.0, 2.0 * pi.hi()), Interval(0.0, pi.hi())}, "(phi0,phi)", 0.1);
      break;
    case TaskId::V2:
      cert.target = "P v^0 coefficient >= 0.01";
      bnb(p_coeff_phi(0), Box{Interval(0.4, half_pi), Interval(0.0, half_pi)}, "(phi0,phi)", 0.01);
      break;
    case TaskId::V3:
      cert.target = "P v^0 coefficient >= 0.01";
      bnb(p_coeff_z(0), Box{Interval(0.01, 0.4), Interval(0.0, 1.0)}, "(phi0,z)", 0.01);
      bnb(p_coeff_z(0), Box{Interval(0.0, 0.4), Interval(0.01, 1.0)}, "(phi0,z)", 0.01);
      break;
    case TaskId::V4:
      cert.target = "P v^0 coefficient in c3 phi0^3 + c1 phi with c3, c1 > 0";
      taylor(PCoeff::V0, Box{Interval(0.0, 0.01), Interval(0.0, 0.021)});
      break;
    case TaskId::V5:
      cert.target = "P v^2 coefficient >= 0.01; c3 phi0^3 + c1 phi with c3, c1 > 0 near the origin";
      bnb(p_coeff_phi(2), Box{Interval(0.11, half_pi), Interval(0.0, half_pi)}, "(phi0,phi)", 0.01);
      bnb(p_coeff_phi(2), Box{Interval(0.0, half_pi), Interval(0.0006, half_pi)}, "(phi0,phi)", 0.01);
      taylor(PCoeff::V2, Box{Interval(0.0, 0.11), Interval(0.0, 0.0006)});
      break;
    case TaskId::V6:
      cert.target = "P v^1 coefficient >= 0.01";
      bnb(p_coeff_phi(1), Box{Interval(1.0, half_pi), Interval(0.0, half_pi)}, "(phi0,phi)", 0.01);
      break;
    case TaskId::V7: {
      cert.target = "dyadic enclosure (1/1024) of {P v^1 coefficient <= 0.01} contained in A";
      const Box domain{Interval(0.0, 1.0), Interval(0.0, 1.0)};
      SublevelStats st;
      const auto sub = enclose_sublevel(p_coeff_z(1), domain, 0.01, defaults::kSublevelDenominator, 3, &st);
      const Box A = reference_box_A();
      cert.regions.push_back({"(phi0,z)", domain});
      cert.boxes_examined = st.boxes_examined;
      cert.max_depth = st.max_depth;
      cert.sublevel = sub;
      cert.sublevel_reference = A;
      cert.sublevel_equals_reference = sub && *sub == A;
      if (sub && !A.contains(*sub)) {
        cert.status = CertStatus::Failed;
        cert.witness = sub;
      }
      break;
    }
    case TaskId::V8:
      cert.target = "min over v >= 0 of P - 2v^3 >= 0.5 on A";
      bnb(quadratic_min_z(), reference_box_A(), "(phi0,z)", 0.5);
      break;
    case TaskId::V9: {
      cert.target = "6(3phi - 2sin(2phi) + 2phi cos(2phi)) > 1.9 on [pi/8, 3]; analytic bounds at sample points";
      bnb(q_constant_term(), Box{Interval(pi.lo() / 8.0, 3.0)}, "(phi)", 1.9);
      if (cert.status == CertStatus::Proved && !(cert.certified_min && *cert.certified_min > 1.9)) {
        cert.status = CertStatus::Inconclusive;
      }
      const Interval lin = Interval(6.0) * (sqrt(Interval(2.0)) - Interval(1.0));
      const int n = 1024;
      for (int k = 1; k <= n; ++k) {
        const Interval x = Interval(pi.lo() / 8.0) * Interval(static_cast<double>(k)) / Interval(n);
        const Interval xs(x.lo());
        const Interval x2(3.0 + 64.0 * k / n);
        const bool ok1 = (fn_q0(xs) - lin * xs).lo() >= 0.0;
        const bool ok2 = (fn_q0(x2) - Interval(6.0) * (x2 - Interval(2.0))).lo() >= 0.0;
        cert.sample_points += 2;
        if (!ok1 || !ok2) {
          cert.status = CertStatus::Failed;
          if (!cert.witness) cert.witness = Box{ok1 ? x2 : xs};
        }
      }
      cert.regions.push_back({"(phi)", Box{Interval(0.0, pi.hi() / 8.0)}});
      cert.regions.push_back({"(phi)", Box{Interval(3.0, 67.0)}});
      break;
    }
  }
  cert.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return cert;
}

}  // namespace biharm
