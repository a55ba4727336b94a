#pragma once

// Evaluation of the autonomous fourth-order ODE satisfied by the radial
// profile of an O(d)-equivariant biharmonic map, phi(s) = psi(e^s):
//
//   phi'''' = q(phi) phi'' - f(phi) + (6 phi'' + q'(phi)/2) (phi')^2
//             + 2(d-4) (g(phi) phi' + (phi')^3 - phi''')
//
// together with its energy, symmetries, critical points and linearizations,
// the harmonic-map analogue, and the radial (psi, r) form of the equation.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace biharm {

inline constexpr double kPi = std::numbers::pi;
inline const double kSqrt6 = std::sqrt(6.0);
/// 2*sqrt(6): c_star for d = 5 and the cap of the region C.
inline const double kTwoSqrt6 = 2.0 * std::sqrt(6.0);

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

/// Domain dimension d. Accepted range for evaluation is 3..10.
class Dimension {
 public:
  explicit Dimension(int d) : d_(d) {
    if (d < 3 || d > 10) {
      throw std::invalid_argument("dimension d must lie in 3..10, got " + std::to_string(d));
    }
  }
  int value() const { return d_; }
  double real() const { return static_cast<double>(d_); }
  friend bool operator==(Dimension, Dimension) = default;

 private:
  int d_;
};

/// 4-jet (phi, phi', phi'', phi''') in s-time.
struct State {
  double phi = 0.0;
  double dphi = 0.0;
  double d2phi = 0.0;
  double d3phi = 0.0;

  static State from(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
  Vec4 vec() const { return {phi, dphi, d2phi, d3phi}; }
  bool finite() const {
    return std::isfinite(phi) && std::isfinite(dphi) && std::isfinite(d2phi) && std::isfinite(d3phi);
  }
  double norm() const;
  friend bool operator==(const State&, const State&) = default;
};

State operator+(const State& a, const State& b);
State operator-(const State& a, const State& b);
State operator*(double k, const State& a);

struct EnergyBreakdown {
  double total = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double rate = 0.0;
};

enum class Parity { Even, Odd };

struct Linearization {
  Parity parity = Parity::Even;
  Mat4 matrix{};
  // Filled for even parity only.
  std::array<double, 4> eigenvalues{};
  std::array<Vec4, 4> eigenvectors{};
};

struct HarmonicState {
  double phi = 0.0;
  double dphi = 0.0;
};

// Coefficient functions.
double coeff_q(Dimension d, double phi);
double coeff_dq(Dimension d, double phi);  // q'(phi)
double coeff_f(Dimension d, double phi);
double coeff_g(Dimension d, double phi);
double coeff_F(Dimension d, double phi);  // potential, F' = f, F(0) = 0

/// phi'''' as a function of the 4-jet.
double fourth_derivative(Dimension d, const State& x);

/// Right-hand side of the first-order system for (phi, phi', phi'', phi''').
Vec4 vector_field(Dimension d, const State& x);

/// Field of the time-reversed equation for u(s) = phi(-s).
Vec4 reversed_field(Dimension d, const State& u);

EnergyBreakdown energy(Dimension d, const State& x);

/// s -> phi(s) + k*pi.
State symmetry_shift(const State& x, int k);
/// s -> k*pi - phi(s).
State symmetry_reflect(const State& x, int k);
/// Image of a field vector under the derivative of symmetry_reflect.
Vec4 reflect_derivative(const Vec4& v);

/// Blowup threshold on |phi''| for d in {5, 6, 7}.
double c_star(Dimension d);

/// The three maxima whose largest value is c_star, each in closed form:
/// max(-q'/12), max(f/q), max(sqrt(2F)).
std::array<double, 3> c_star_terms(Dimension d);

/// Linearization at the critical point k*pi/2 of the given parity.
Linearization linearization(Dimension d, Parity parity);

std::array<double, 2> harmonic_field(Dimension d, const HarmonicState& h);
struct HarmonicEnergy {
  double value = 0.0;
  double rate = 0.0;
};
HarmonicEnergy harmonic_energy(Dimension d, const HarmonicState& h);

/// Radial jet (psi, psi', psi'', psi''', psi'''').
using RadialJet = std::array<double, 5>;

/// psi'''' minus the right-hand side of the radial equation at radius r > 0.
double psi_residual(Dimension d, double r, const RadialJet& jet);

/// Chain rule: radial jet at r = e^s of psi(r) = phi(log r), with phi''''
/// taken from the vector field.
RadialJet radial_jet(Dimension d, double r, const State& x);

}  // namespace biharm
