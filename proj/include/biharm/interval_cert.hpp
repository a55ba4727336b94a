#pragma once

// Validated positivity and sublevel-set certificates for the coefficients of
// the (phi, w) and xi systems (d = 5), by interval branch and bound.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "biharm/defaults.hpp"
#include "biharm/interval.hpp"
#include "biharm/taylor_form.hpp"

namespace biharm {

enum class TaskId { V1 = 1, V2, V3, V4, V5, V6, V7, V8, V9 };

std::string to_string(TaskId t);
/// Accepts "V1".."V9" (case-insensitive); throws std::invalid_argument otherwise.
TaskId parse_task_id(const std::string& s);
std::vector<TaskId> all_tasks();
double default_min_width(TaskId t);

enum class CertStatus { Proved, Failed, Inconclusive };
std::string to_string(CertStatus s);
/// Failed > Inconclusive > Proved.
CertStatus worst(CertStatus a, CertStatus b);

struct CertRegion {
  std::string coords;  // "(phi0,phi)", "(phi0,z)" or "(phi)"
  Box box;
};

struct CoeffEnclosure {
  Interval phi0_cubed;
  Interval phi;
};

struct Certificate {
  std::optional<TaskId> task;
  std::vector<CertRegion> regions;
  std::string target;
  CertStatus status = CertStatus::Proved;
  std::optional<Box> witness;
  long boxes_examined = 0;
  int max_depth = 0;
  double min_width = 0.0;
  std::string rounding_mode = kRoundingMode;
  double wall_ms = 0.0;
  // Smallest lower end over discharged leaves: a certified lower bound.
  std::optional<double> certified_min;
  // Task-specific results.
  std::optional<CoeffEnclosure> taylor;
  std::optional<Box> sublevel;
  std::optional<Box> sublevel_reference;
  std::optional<bool> sublevel_equals_reference;
  long sample_points = 0;
};

/// Folds part into acc: worst status, first witness, summed and maximal stats.
void merge_into(Certificate& acc, const Certificate& part);

using BoxFunction = std::function<Interval(const Box&)>;

struct BnbOptions {
  int threads = 0;  // 0: default_threads()
  int split_depth = defaults::kSplitDepth;
};

/// BIHARM_THREADS if set to a positive integer, else the hardware count.
int default_threads();

/// f(b) intersected with the enclosure of the box b was split from, so that
/// enclosures never widen under subdivision.
Interval nested_eval(const BoxFunction& f, const Box& b, const Interval& parent);

/// Branch and bound on f >= bound over box. The root is split into a fixed set
/// of subtrees, independent of the thread count, each searched depth-first.
Certificate prove_lower_bound(const BoxFunction& f, const Box& box, double bound, double min_width,
                              const BnbOptions& opt = {});

/// Taylor polynomial about 0 with a Lagrange remainder coefficient: on the
/// domain, f(x) = sum coefficients[k] x^k + r x^(degree+1) for some r in
/// remainder.
struct TaylorEnclosure {
  double center = 0.0;
  int degree = 0;
  std::vector<Interval> coefficients;
  Interval remainder;
  Interval domain;

  Interval eval(const Interval& x) const;
  /// Range of the remainder term over the domain.
  Interval remainder_bound() const;
};

/// sin to degree 6 on a domain inside [0, pi/2].
TaylorEnclosure sin_taylor(const Interval& domain);
/// cos to degree 5 on a domain inside [-pi/2, pi/2].
TaylorEnclosure cos_taylor(const Interval& domain);

enum class PCoeff { V0, V2 };

/// Two-term enclosure c3 phi0^3 + c1 phi of the v^0 or v^2 coefficient of P
/// over a small (phi0, phi) box at the origin. Throws std::invalid_argument
/// for boxes outside [0, 0.01] x [0, 0.021] (V0) or [0, 0.11] x [0, 0.0006] (V2).
CoeffEnclosure taylor_enclose_P_coeff(PCoeff which, const Box& box);

struct SublevelStats {
  long boxes_examined = 0;
  int max_depth = 0;
};

/// Smallest box with endpoints in (1/denominator)Z containing every grid cell
/// of domain on which f <= threshold cannot be excluded. Cells that survive
/// are re-tested on a 2^refine x 2^refine subgrid before being kept. Domain
/// endpoints must be multiples of 1/denominator. nullopt when every cell is
/// excluded.
std::optional<Box> enclose_sublevel(const BoxFunction& f, const Box& domain, double threshold, long denominator,
                                    int refine = 3, SublevelStats* stats = nullptr);

/// Interval evaluators of the certified functions, each the intersection of
/// the natural extension and the centered Taylor form. k selects the power of
/// v in P; z-variants take (phi0, z) with phi = phi0 + z cos(phi0)/(1 + sin(phi0)).
BoxFunction p_coeff_phi(int k);
BoxFunction p_coeff_z(int k);
/// min over v >= 0 of c0 + c1 v + c2 v^2, in (phi0, z).
BoxFunction quadratic_min_z();
/// 6(3 phi - 2 sin(2 phi) + 2 phi cos(2 phi)).
BoxFunction q_constant_term();
/// 4 cos(2 phi) - 2 sqrt(6) cos(phi0) + 9.
BoxFunction a_without_v();

/// The box A = [0, 783/1024] x [779/1024, 1] in (phi0, z).
Box reference_box_A();

Certificate run_task(TaskId id, std::optional<double> min_width = std::nullopt, const BnbOptions& opt = {});

}  // namespace biharm
