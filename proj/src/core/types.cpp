#include "cpd/core/types.hpp"

#include <algorithm>
#include <set>

namespace cpd {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Satellite: return "satellite";
    case NodeKind::RUser: return "r-user";
    case NodeKind::PUser: return "p-user";
    case NodeKind::GroundStation: return "ground-station";
  }
  return "unknown";
}

Node Node::satellite(std::string name, int reflector_terminals, TrajectoryRef traj) {
  return Node{std::move(name), NodeKind::Satellite, reflector_terminals, true, std::move(traj)};
}

Node Node::r_user(std::string name, TrajectoryRef traj) {
  return Node{std::move(name), NodeKind::RUser, 1, false, std::move(traj)};
}

Node Node::p_user(std::string name, TrajectoryRef traj) {
  return Node{std::move(name), NodeKind::PUser, 0, true, std::move(traj)};
}

Node Node::ground_station(std::string name, TrajectoryRef traj) {
  return Node{std::move(name), NodeKind::GroundStation, std::nullopt, false, std::move(traj)};
}

namespace {

void check_inventory(const Node& n) {
  auto fail = [&](const std::string& why) {
    throw ModelError("node '" + n.name + "' (" + to_string(n.kind) + "): " + why);
  };
  switch (n.kind) {
    case NodeKind::Satellite:
      if (!n.reflector_terminals || *n.reflector_terminals < 1) fail("needs at least one reflector terminal");
      if (!n.has_phased_array) fail("satellites carry a phased array");
      break;
    case NodeKind::RUser:
      if (n.reflector_terminals != 1) fail("R-users carry exactly one reflector terminal");
      if (n.has_phased_array) fail("R-users carry no phased array");
      break;
    case NodeKind::PUser:
      if (n.reflector_terminals.value_or(-1) != 0) fail("P-users carry no reflector terminal");
      if (!n.has_phased_array) fail("P-users carry a phased array");
      break;
    case NodeKind::GroundStation:
      if (n.reflector_terminals) fail("ground stations have unbounded reflector capacity");
      if (n.has_phased_array) fail("ground stations carry no phased array");
      break;
  }
}

}  // namespace

NodeSet::NodeSet(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  std::stable_sort(nodes_.begin(), nodes_.end(),
                   [](const Node& a, const Node& b) { return a.kind < b.kind; });
  std::set<std::string> names;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    check_inventory(n);
    if (!names.insert(n.name).second) throw ModelError("duplicate node name '" + n.name + "'");
    switch (n.kind) {
      case NodeKind::Satellite: satellites_.push_back(id); break;
      case NodeKind::RUser: r_users_.push_back(id); break;
      case NodeKind::PUser: p_users_.push_back(id); break;
      case NodeKind::GroundStation: ground_stations_.push_back(id); break;
    }
  }
}

std::optional<NodeId> NodeSet::find(const std::string& name) const {
  for (NodeId id = 0; id < nodes_.size(); ++id)
    if (nodes_[id].name == name) return id;
  return std::nullopt;
}

void TimeGrid::validate() const {
  if (period_count < 1) throw ModelError("time grid: period_count must be >= 1");
  if (period_length.count() <= 0) throw ModelError("time grid: period length must be positive");
  if (slot_length.count() <= 0) throw ModelError("time grid: slot length must be positive");
  if (superframes_per_period < 1) throw ModelError("time grid: superframes_per_period must be >= 1");
  if (switching_superframes >= superframes_per_period)
    throw ModelError("time grid: switching_superframes must be < superframes_per_period");
  if (period_length.count() % static_cast<long>(superframes_per_period) != 0)
    throw ModelError("time grid: period length is not a whole number of superframes");
  if (superframe_length().count() % slot_length.count() != 0)
    throw ModelError("time grid: superframe length is not a whole number of slots");
  if (slots_per_superframe() < 1) throw ModelError("time grid: superframe must hold at least one slot");
}

std::chrono::seconds TimeGrid::superframe_length() const {
  return period_length / static_cast<long>(superframes_per_period);
}

std::size_t TimeGrid::slots_per_superframe() const {
  return static_cast<std::size_t>(superframe_length() / slot_length);
}

void AdjacencyMatrix::set(NodeId i, NodeId j, bool value) {
  cells_[i * n_ + j] = value ? 1 : 0;
  cells_[j * n_ + i] = value ? 1 : 0;
}

std::vector<NodePair> AdjacencyMatrix::pairs() const {
  std::vector<NodePair> out;
  for (NodeId i = 0; i < n_; ++i)
    for (NodeId j = i + 1; j < n_; ++j)
      if (cells_[i * n_ + j]) out.emplace_back(i, j);
  return out;
}

std::size_t AdjacencyMatrix::degree(NodeId i) const {
  std::size_t d = 0;
  for (NodeId j = 0; j < n_; ++j) d += cells_[i * n_ + j] ? 1 : 0;
  return d;
}

AdjacencyMatrix active_reflector_links(const ReflectorPlan& plan, const TimeGrid& grid,
                                       std::size_t period, std::size_t superframe) {
  const AdjacencyMatrix& now = plan.links.at(period);
  if (superframe >= grid.switching_superframes) return now;
  AdjacencyMatrix kept(now.size());
  if (period == 0) return kept;
  const AdjacencyMatrix& before = plan.links.at(period - 1);
  for (const NodePair& p : now.pairs())
    if (before(p.a, p.b)) kept.set(p.a, p.b, true);
  return kept;
}

bool reflector_capable(const NodeSet& nodes, NodeId i, NodeId j) {
  if (i == j) return false;
  const NodeKind a = nodes.kind(i), b = nodes.kind(j);
  if (a != NodeKind::Satellite && b != NodeKind::Satellite) return false;
  const NodeKind other = a == NodeKind::Satellite ? b : a;
  return other == NodeKind::Satellite || other == NodeKind::RUser || other == NodeKind::GroundStation;
}

bool phased_array_capable(const NodeSet& nodes, NodeId i, NodeId j) {
  if (i == j) return false;
  const NodeKind a = nodes.kind(i), b = nodes.kind(j);
  if (a != NodeKind::Satellite && b != NodeKind::Satellite) return false;
  const NodeKind other = a == NodeKind::Satellite ? b : a;
  return other == NodeKind::Satellite || other == NodeKind::PUser;
}

}  // namespace cpd
