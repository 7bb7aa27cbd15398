#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cpd {

// Dense node index assigned at scenario load. Satellites come first, then
// R-users, P-users and ground stations, so index order is a stable tie-break.
using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { Satellite, RUser, PUser, GroundStation };

const char* to_string(NodeKind kind);

struct OrbitRef {
  std::string orbit;   // catalog entry name
  double phase = 0.0;  // fraction of the catalog period to advance at epoch 0
};

struct GroundSite {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
};

using TrajectoryRef = std::variant<std::monostate, OrbitRef, GroundSite>;

struct Node {
  std::string name;
  NodeKind kind = NodeKind::Satellite;
  // nullopt means unbounded (ground stations).
  std::optional<int> reflector_terminals;
  bool has_phased_array = false;
  TrajectoryRef trajectory;

  static Node satellite(std::string name, int reflector_terminals, TrajectoryRef traj = {});
  static Node r_user(std::string name, TrajectoryRef traj = {});
  static Node p_user(std::string name, TrajectoryRef traj = {});
  static Node ground_station(std::string name, TrajectoryRef traj = {});
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable, kind-ordered node inventory.
class NodeSet {
 public:
  NodeSet() = default;
  // Stable-sorts by kind and assigns dense ids. Throws ModelError on
  // terminal-inventory violations or duplicate names.
  explicit NodeSet(std::vector<Node> nodes);

  std::size_t size() const { return nodes_.size(); }
  const Node& operator[](NodeId id) const { return nodes_.at(id); }
  const std::vector<Node>& all() const { return nodes_; }

  std::span<const NodeId> satellites() const { return satellites_; }
  std::span<const NodeId> r_users() const { return r_users_; }
  std::span<const NodeId> p_users() const { return p_users_; }
  std::span<const NodeId> ground_stations() const { return ground_stations_; }

  NodeKind kind(NodeId id) const { return nodes_.at(id).kind; }
  bool is_satellite(NodeId id) const { return kind(id) == NodeKind::Satellite; }
  std::optional<NodeId> find(const std::string& name) const;

 private:
  std::vector<Node> nodes_;
  std::vector<NodeId> satellites_, r_users_, p_users_, ground_stations_;
};

// Reflector period / superframe / slot hierarchy.
struct TimeGrid {
  std::size_t period_count = 1;
  std::chrono::seconds period_length{3600};
  std::size_t superframes_per_period = 12;
  std::size_t switching_superframes = 2;
  std::chrono::seconds slot_length{10};

  void validate() const;  // throws ModelError
  std::chrono::seconds superframe_length() const;
  std::size_t slots_per_superframe() const;
  std::size_t slots_per_period() const { return slots_per_superframe() * superframes_per_period; }
  std::size_t superframe_count() const { return period_count * superframes_per_period; }
  std::size_t total_slots() const { return superframe_count() * slots_per_superframe(); }
};

struct NodePair {
  NodeId a = 0;
  NodeId b = 0;
  NodePair() = default;
  NodePair(NodeId x, NodeId y) : a(x < y ? x : y), b(x < y ? y : x) {}
  auto operator<=>(const NodePair&) const = default;
};

// Dense n x n 0/1 relation for one time layer. Stored in full so that
// symmetry and irreflexivity are checkable rather than structural.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool operator()(NodeId i, NodeId j) const { return cells_[i * n_ + j] != 0; }
  std::uint8_t cell(NodeId i, NodeId j) const { return cells_[i * n_ + j]; }
  // Writes both orientations.
  void set(NodeId i, NodeId j, bool value);
  // Writes a single orientation; for constructing malformed inputs.
  void set_cell(NodeId i, NodeId j, std::uint8_t value) { cells_[i * n_ + j] = value; }

  std::vector<NodePair> pairs() const;  // i < j with cell(i, j) != 0
  std::size_t degree(NodeId i) const;
  bool operator==(const AdjacencyMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> cells_;
};

// Reflector visibility per period (FSA semantics) and phased-array
// visibility per (period, superframe) indexed period * superframes + s.
struct VisibilitySet {
  std::vector<AdjacencyMatrix> period;
  std::vector<AdjacencyMatrix> superframe;
};

struct ReflectorParams {
  int terminals_per_satellite = 2;  // r
  int access_window = 2;            // f
  int ground_links = 2;             // L_G
  long long penalty = 1000;         // P
};

// A user access window that no assignment can satisfy (the user sees no
// satellite in any of its periods). Reported, not enforced.
struct WaivedWindow {
  NodeId user = 0;
  std::size_t first_period = 0;
  std::size_t last_period = 0;
};

struct ReflectorPlan {
  std::string scheme;
  std::vector<AdjacencyMatrix> links;  // x(i, j, m)
  ReflectorParams params;
  std::vector<int> deficits;  // p(m)
  std::vector<WaivedWindow> waived_windows;
  bool proven_optimal = true;

  std::size_t period_count() const { return links.size(); }
};

using Matching = std::vector<NodePair>;

struct SuperframePlan {
  std::vector<Matching> slots;  // M_1 .. M_T
};

struct PhasedArrayPlan {
  std::string scheme;
  std::size_t superframes_per_period = 0;
  std::vector<SuperframePlan> superframes;  // H per superframe, global order
};

// Reflector links usable in a given superframe. During the switching
// superframes at the head of a period only links kept from the previous
// period are up.
AdjacencyMatrix active_reflector_links(const ReflectorPlan& plan, const TimeGrid& grid,
                                       std::size_t period, std::size_t superframe);

// Whether a pair may carry a reflector / phased-array link at all.
bool reflector_capable(const NodeSet& nodes, NodeId i, NodeId j);
bool phased_array_capable(const NodeSet& nodes, NodeId i, NodeId j);

}  // namespace cpd
