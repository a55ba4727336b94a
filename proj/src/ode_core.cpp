#include "biharm/ode_core.hpp"

#include <algorithm>

namespace biharm {

double State::norm() const { return std::sqrt(phi * phi + dphi * dphi + d2phi * d2phi + d3phi * d3phi); }

State operator+(const State& a, const State& b) {
  return {a.phi + b.phi, a.dphi + b.dphi, a.d2phi + b.d2phi, a.d3phi + b.d3phi};
}
State operator-(const State& a, const State& b) {
  return {a.phi - b.phi, a.dphi - b.dphi, a.d2phi - b.d2phi, a.d3phi - b.d3phi};
}
State operator*(double k, const State& a) { return {k * a.phi, k * a.dphi, k * a.d2phi, k * a.d3phi}; }

double coeff_q(Dimension dim, double phi) {
  const double d = dim.real();
  return (d - 1.0) * std::cos(2.0 * phi) - (d - 11.0) * d - 21.0;
}

double coeff_dq(Dimension dim, double phi) { return -2.0 * (dim.real() - 1.0) * std::sin(2.0 * phi); }

double coeff_f(Dimension dim, double phi) {
  const double d = dim.real();
  return 1.5 * (d - 3.0) * (d - 1.0) * std::sin(2.0 * phi);
}

double coeff_g(Dimension dim, double phi) {
  const double d = dim.real();
  return 0.5 * ((d - 1.0) * std::cos(2.0 * phi) + 3.0 * d - 5.0);
}

double coeff_F(Dimension dim, double phi) {
  const double d = dim.real();
  const double s = std::sin(phi);
  return 1.5 * (d - 3.0) * (d - 1.0) * s * s;
}

double fourth_derivative(Dimension dim, const State& x) {
  const double alpha = 2.0 * (dim.real() - 4.0);
  const double v = x.dphi;
  const double v2 = v * v;
  return coeff_q(dim, x.phi) * x.d2phi - coeff_f(dim, x.phi) + (6.0 * x.d2phi + 0.5 * coeff_dq(dim, x.phi)) * v2 +
         alpha * (coeff_g(dim, x.phi) * v + v2 * v - x.d3phi);
}

Vec4 vector_field(Dimension d, const State& x) { return {x.dphi, x.d2phi, x.d3phi, fourth_derivative(d, x)}; }

Vec4 reversed_field(Dimension dim, const State& u) {
  const double d = dim.real();
  const double c = std::cos(2.0 * u.phi);
  const double s = std::sin(2.0 * u.phi);
  const double v = u.dphi;
  const double u4 = ((d - 1.0) * c - (d - 11.0) * d - 21.0) * u.d2phi - 1.5 * (d - 3.0) * (d - 1.0) * s +
                    (6.0 * u.d2phi - (d - 1.0) * s) * v * v - (d - 4.0) * ((d - 1.0) * c + 3.0 * d - 5.0) * v -
                    2.0 * (d - 4.0) * v * v * v + 2.0 * (d - 4.0) * u.d3phi;
  return {u.dphi, u.d2phi, u.d3phi, u4};
}

EnergyBreakdown energy(Dimension dim, const State& x) {
  const double d = dim.real();
  const double v = x.dphi;
  EnergyBreakdown e;
  e.kinetic = v * (x.d3phi + 2.0 * (d - 4.0) * x.d2phi - 0.5 * coeff_q(dim, x.phi) * v - 1.5 * v * v * v);
  e.potential = coeff_F(dim, x.phi) - 0.5 * x.d2phi * x.d2phi;
  e.total = e.kinetic + e.potential;
  e.rate = (d - 4.0) * (2.0 * x.d2phi * x.d2phi + ((d - 1.0) * std::cos(2.0 * x.phi) + 3.0 * d - 5.0) * v * v +
                        2.0 * v * v * v * v);
  return e;
}

State symmetry_shift(const State& x, int k) { return {x.phi + k * kPi, x.dphi, x.d2phi, x.d3phi}; }

State symmetry_reflect(const State& x, int k) { return {k * kPi - x.phi, -x.dphi, -x.d2phi, -x.d3phi}; }

Vec4 reflect_derivative(const Vec4& v) { return {-v[0], -v[1], -v[2], -v[3]}; }

std::array<double, 3> c_star_terms(Dimension dim) {
  const double d = dim.real();
  // -q'/12 = (d-1) sin(2 phi) / 6, maximal where sin(2 phi) = 1.
  const double t1 = (d - 1.0) / 6.0;
  // f/q = A sin(x) / (B cos(x) + C) with C > |B|; maximal at cos(x) = -B/C.
  const double A = 1.5 * (d - 3.0) * (d - 1.0);
  const double B = d - 1.0;
  const double C = -(d - 11.0) * d - 21.0;
  const double t2 = A / std::sqrt(C * C - B * B);
  // sqrt(2F) is maximal where sin^2 = 1.
  const double t3 = std::sqrt(3.0 * (d - 3.0) * (d - 1.0));
  return {t1, t2, t3};
}

double c_star(Dimension dim) {
  const int d = dim.value();
  if (d < 5 || d > 7) {
    throw std::invalid_argument("c_star is defined for d in {5, 6, 7}, got " + std::to_string(d));
  }
  const auto t = c_star_terms(dim);
  return std::max({t[0], t[1], t[2]});
}

Linearization linearization(Dimension dim, Parity parity) {
  const int di = dim.value();
  if (di == 1 || di == 3) {
    throw std::invalid_argument("critical points kpi/2 are not isolated for d in {1, 3}");
  }
  const double d = dim.real();
  Linearization lin;
  lin.parity = parity;
  for (int i = 0; i < 3; ++i) {
    lin.matrix[i] = {0.0, 0.0, 0.0, 0.0};
    lin.matrix[i][i + 1] = 1.0;
  }
  if (parity == Parity::Even) {
    lin.matrix[3] = {-3.0 * (d - 3.0) * (d - 1.0), 2.0 * (d - 4.0) * (2.0 * d - 3.0), -(d - 12.0) * d - 22.0,
                     8.0 - 2.0 * d};
    lin.eigenvalues = {3.0, 1.0, 1.0 - d, 3.0 - d};
    for (int i = 0; i < 4; ++i) {
      const double l = lin.eigenvalues[i];
      lin.eigenvectors[i] = {1.0, l, l * l, l * l * l};
    }
  } else {
    lin.matrix[3] = {3.0 * (d - 3.0) * (d - 1.0), 2.0 * (d - 4.0) * (d - 2.0), -(d - 10.0) * d - 20.0, 8.0 - 2.0 * d};
  }
  return lin;
}

std::array<double, 2> harmonic_field(Dimension dim, const HarmonicState& h) {
  const double d = dim.real();
  return {h.dphi, 0.5 * (d - 1.0) * std::sin(2.0 * h.phi) - (d - 2.0) * h.dphi};
}

HarmonicEnergy harmonic_energy(Dimension dim, const HarmonicState& h) {
  const double d = dim.real();
  const double c = std::cos(h.phi);
  return {0.5 * h.dphi * h.dphi + 0.5 * (d - 1.0) * c * c, -(d - 2.0) * h.dphi * h.dphi};
}

double psi_residual(Dimension dim, double r, const RadialJet& jet) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("psi_residual requires r > 0");
  }
  const double d = dim.real();
  const auto [psi, p1, p2, p3, p4] = jet;
  const double c = std::cos(2.0 * psi);
  const double s = std::sin(2.0 * psi);
  const double r2 = r * r;
  const double rhs = 6.0 * p1 * p1 * p2 + (2.0 * (d - 1.0) / r) * (p1 * p1 * p1 - p3) -
                     ((d - 1.0) / r2) * ((d - c - 4.0) * p2 + s * p1 * p1) +
                     ((d - 3.0) * (d - 1.0) / (r2 * r)) * (c + 2.0) * p1 -
                     (3.0 * (d - 3.0) * (d - 1.0) / (2.0 * r2 * r2)) * s;
  return p4 - rhs;
}

RadialJet radial_jet(Dimension d, double r, const State& x) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("radial_jet requires r > 0");
  }
  const double p4 = fourth_derivative(d, x);
  const double r2 = r * r;
  return {x.phi, x.dphi / r, (x.d2phi - x.dphi) / r2, (x.d3phi - 3.0 * x.d2phi + 2.0 * x.dphi) / (r2 * r),
          (p4 - 6.0 * x.d3phi + 11.0 * x.d2phi - 6.0 * x.dphi) / (r2 * r2)};
}

}  // namespace biharm
