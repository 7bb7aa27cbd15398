#include "cpd/geometry/orbit_catalog.hpp"

#include <fstream>
#include <sstream>

namespace cpd::geometry {

OrbitCatalog OrbitCatalog::parse(std::istream& in) {
  OrbitCatalog cat;
  const double mu = earth_moon::mass_ratio();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = [&] { return "orbit catalog line " + std::to_string(lineno) + ": "; };
    if (line.rfind("# mu", 0) == 0) {
      std::istringstream ls(line.substr(4));
      double file_mu = 0.0;
      if (!(ls >> file_mu)) throw CatalogError(where() + "unreadable mass ratio");
      if (std::abs(file_mu - mu) > 1e-12)
        throw CatalogError(where() + "mass ratio does not match the Earth-Moon system");
      continue;
    }
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    OrbitEntry e;
    if (!(ls >> e.name)) continue;
    Vec3& r = e.initial.position;
    Vec3& v = e.initial.velocity;
    if (!(ls >> e.family >> r.x >> r.y >> r.z >> v.x >> v.y >> v.z >> e.period))
      throw CatalogError(where() + "expected: name family x y z vx vy vz period");
    std::string extra;
    if (ls >> extra) throw CatalogError(where() + "trailing field '" + extra + "'");
    e.initial.mu = mu;
    try {
      e.initial.validate();
    } catch (const std::invalid_argument& ex) {
      throw CatalogError(where() + ex.what());
    }
    if (!(e.period > 0.0)) throw CatalogError(where() + "period must be positive");
    if (cat.contains(e.name)) throw CatalogError(where() + "duplicate orbit '" + e.name + "'");
    cat.add(std::move(e));
  }
  return cat;
}

OrbitCatalog OrbitCatalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open orbit catalog '" + path + "'");
  return parse(in);
}

const OrbitEntry& OrbitCatalog::at(const std::string& name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) throw CatalogError("unknown orbit '" + name + "'");
  return it->second;
}

void OrbitCatalog::add(OrbitEntry entry) {
  const std::string key = entry.name;
  entries_.insert_or_assign(key, std::move(entry));
}

}  // namespace cpd::geometry
