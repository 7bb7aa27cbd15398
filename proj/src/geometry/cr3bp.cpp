#include "cpd/geometry/cr3bp.hpp"

#include <sstream>

namespace cpd::geometry {

namespace earth_moon {

double mass_ratio() { return kGmMoonKm3s2 / (kGmEarthKm3s2 + kGmMoonKm3s2); }

double time_unit_s() {
  return std::sqrt(kDistanceKm * kDistanceKm * kDistanceKm / (kGmEarthKm3s2 + kGmMoonKm3s2));
}

}  // namespace earth_moon

void Cr3bpState::validate() const {
  if (!(mu > 0.0 && mu < 0.5)) throw std::invalid_argument("CR3BP mass ratio must lie in (0, 0.5)");
  const double comps[] = {position.x, position.y, position.z, velocity.x, velocity.y, velocity.z, epoch};
  for (double c : comps)
    if (!std::isfinite(c)) throw std::invalid_argument("CR3BP state has a non-finite component");
}

Vec3 acceleration(const Vec3& r, const Vec3& v, double mu) {
  const Vec3 d1{r.x + mu, r.y, r.z};
  const Vec3 d2{r.x - 1.0 + mu, r.y, r.z};
  const double r1 = d1.norm();
  const double r2 = d2.norm();
  const double c1 = (1.0 - mu) / (r1 * r1 * r1);
  const double c2 = mu / (r2 * r2 * r2);
  return {2.0 * v.y + r.x - c1 * d1.x - c2 * d2.x,
          -2.0 * v.x + r.y - c1 * d1.y - c2 * d2.y,
          -c1 * d1.z - c2 * d2.z};
}

namespace {

struct Deriv {
  Vec3 dr, dv;
};

Deriv rates(const Vec3& r, const Vec3& v, double mu) { return {v, acceleration(r, v, mu)}; }

void rk4_step(Cr3bpState& s, double h) {
  const Deriv k1 = rates(s.position, s.velocity, s.mu);
  const Deriv k2 = rates(s.position + k1.dr * (h / 2), s.velocity + k1.dv * (h / 2), s.mu);
  const Deriv k3 = rates(s.position + k2.dr * (h / 2), s.velocity + k2.dv * (h / 2), s.mu);
  const Deriv k4 = rates(s.position + k3.dr * h, s.velocity + k3.dv * h, s.mu);
  s.position = s.position + (k1.dr + k2.dr * 2.0 + k3.dr * 2.0 + k4.dr) * (h / 6);
  s.velocity = s.velocity + (k1.dv + k2.dv * 2.0 + k3.dv * 2.0 + k4.dv) * (h / 6);
  s.epoch += h;
}

bool finite(const Cr3bpState& s) {
  return std::isfinite(s.position.x) && std::isfinite(s.position.y) && std::isfinite(s.position.z) &&
         std::isfinite(s.velocity.x) && std::isfinite(s.velocity.y) && std::isfinite(s.velocity.z);
}

}  // namespace

Cr3bpState propagate(const Cr3bpState& state, double dt, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("propagate: step must be positive");
  if (!(dt >= 0.0)) throw std::invalid_argument("propagate: dt must be non-negative");
  state.validate();
  Cr3bpState s = state;
  const double t_end = state.epoch + dt;
  const auto full_steps = static_cast<long long>(std::floor(dt / step));
  for (long long k = 0; k < full_steps; ++k) {
    rk4_step(s, step);
    if (!finite(s)) {
      std::ostringstream msg;
      msg << "propagate: state became non-finite at t=" << s.epoch << " (close pass through a primary?)";
      throw PropagationError(msg.str());
    }
  }
  const double rest = t_end - s.epoch;
  if (rest > 0.0) rk4_step(s, rest);
  if (!finite(s)) throw PropagationError("propagate: state became non-finite on the final step");
  s.epoch = t_end;
  return s;
}

double jacobi_constant(const Cr3bpState& s) {
  const Vec3& r = s.position;
  const double r1 = Vec3{r.x + s.mu, r.y, r.z}.norm();
  const double r2 = Vec3{r.x - 1.0 + s.mu, r.y, r.z}.norm();
  const double u = 0.5 * (r.x * r.x + r.y * r.y) + (1.0 - s.mu) / r1 + s.mu / r2;
  return 2.0 * u - s.velocity.dot(s.velocity);
}

std::array<Vec3, 5> libration_points(double mu) {
  // Collinear points: roots of dU/dx on y = z = 0, by bisection.
  auto dudx = [mu](double x) {
    const double a = x + mu, b = x - 1.0 + mu;
    return x - (1.0 - mu) * a / std::pow(std::abs(a), 3) - mu * b / std::pow(std::abs(b), 3);
  };
  auto root = [&](double lo, double hi) {
    double flo = dudx(lo);
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      const double fm = dudx(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  const double eps = 1e-9;
  return {Vec3{root(0.5, 1.0 - mu - eps), 0, 0}, Vec3{root(1.0 - mu + eps, 1.5), 0, 0},
          Vec3{root(-1.5, -mu - eps), 0, 0}, Vec3{0.5 - mu, std::sqrt(3.0) / 2.0, 0},
          Vec3{0.5 - mu, -std::sqrt(3.0) / 2.0, 0}};
}

}  // namespace cpd::geometry
