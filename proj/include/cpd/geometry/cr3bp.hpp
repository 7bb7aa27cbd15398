#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace cpd::geometry {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  bool operator==(const Vec3&) const = default;
};

// Earth-Moon constants. Lengths are normalised by the mean Earth-Moon
// distance and times by the inverse mean motion.
namespace earth_moon {
inline constexpr double kGmEarthKm3s2 = 398600.4418;
inline constexpr double kGmMoonKm3s2 = 4902.800066;
inline constexpr double kDistanceKm = 384400.0;
inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kMoonRadiusKm = 1737.4;
inline constexpr double kEarthRotationRadS = 7.2921159e-5;  // sidereal

double mass_ratio();        // mu
double time_unit_s();       // seconds per nondimensional time unit
}  // namespace earth_moon

// Rotating-frame CR3BP state. Primaries sit at (-mu, 0, 0) and (1 - mu, 0, 0).
struct Cr3bpState {
  Vec3 position;
  Vec3 velocity;
  double mu = 0.0;
  double epoch = 0.0;

  void validate() const;  // throws std::invalid_argument
};

class PropagationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultStep = 1e-4;

// Fixed-step classical RK4. The final step is shortened to land on dt.
Cr3bpState propagate(const Cr3bpState& state, double dt, double step = kDefaultStep);

double jacobi_constant(const Cr3bpState& state);

// Acceleration in the rotating frame.
Vec3 acceleration(const Vec3& r, const Vec3& v, double mu);

// L1..L5 positions for a mass ratio.
std::array<Vec3, 5> libration_points(double mu);

}  // namespace cpd::geometry
