#pragma once

#include <istream>
#include <map>
#include <stdexcept>
#include <string>

#include "cpd/geometry/cr3bp.hpp"

namespace cpd::geometry {

struct OrbitEntry {
  std::string name;
  std::string family;  // equilibrium, dro, lyapunov, halo, vertical, elfo, ...
  Cr3bpState initial;
  double period = 0.0;  // nondimensional
};

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Whitespace-separated text, one orbit per line:
//   name family x y z vx vy vz period
// '#' starts a comment. An optional "# mu <value>" line is checked against
// the Earth-Moon mass ratio.
class OrbitCatalog {
 public:
  static OrbitCatalog parse(std::istream& in);
  static OrbitCatalog load(const std::string& path);

  const OrbitEntry& at(const std::string& name) const;
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }
  const std::map<std::string, OrbitEntry>& entries() const { return entries_; }
  void add(OrbitEntry entry);

 private:
  std::map<std::string, OrbitEntry> entries_;
};

}  // namespace cpd::geometry
