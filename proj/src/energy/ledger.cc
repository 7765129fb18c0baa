// SPDX-License-Identifier: Apache-2.0
#include "fttr/energy/ledger.h"

#include <stdexcept>

namespace fttr::energy {

void EnergyLedger::add_node(NodeId node, NodeType type, PowerState initial, double watts, SimTime at) {
  if (nodes_.count(node)) throw std::invalid_argument{"node already in the ledger"};
  nodes_[node] = Node{type, {}, {initial, at, at, watts}};
}

void EnergyLedger::enter(NodeId node, PowerState state, double watts, SimTime at) {
  Node& n = nodes_.at(node);
  if (n.closed) throw std::logic_error{"ledger already closed"};
  if (at < n.open.enter) throw std::logic_error{"ledger time went backwards"};
  if (n.open.state == state && n.open.watts == watts) return;
  if (at > n.open.enter) {
    n.open.exit = at;
    n.done.push_back(n.open);
  }
  n.open = {state, at, at, watts};
}

void EnergyLedger::close(SimTime horizon) {
  for (auto& [id, n] : nodes_) {
    if (n.closed) continue;
    n.open.exit = horizon;
    if (horizon > n.open.enter) n.done.push_back(n.open);
    n.closed = true;
  }
}

PowerState EnergyLedger::state(NodeId node) const { return nodes_.at(node).open.state; }

std::vector<NodeId> EnergyLedger::nodes() const {
  std::vector<NodeId> out;
  for (const auto& [id, n] : nodes_) out.push_back(id);
  return out;
}

double EnergyLedger::joules(NodeId node) const {
  long double sum = 0;
  for (const StateInterval& i : nodes_.at(node).done) sum += i.joules();
  return static_cast<double>(sum);
}

double EnergyLedger::total_joules() const {
  long double sum = 0;
  for (const auto& [id, n] : nodes_) sum += joules(id);
  return static_cast<double>(sum);
}

std::map<PowerState, Duration> EnergyLedger::residency(NodeId node) const {
  std::map<PowerState, Duration> out;
  for (const StateInterval& i : nodes_.at(node).done) out[i.state] += i.exit - i.enter;
  return out;
}

std::optional<std::string> EnergyLedger::partition_violation(SimTime horizon) const {
  for (const auto& [id, n] : nodes_) {
    SimTime at = kTimeZero;
    for (const StateInterval& i : n.done) {
      if (i.enter != at)
        return "node " + to_string(id) + ": interval starts at " + std::to_string(to_ns(i.enter)) + ", expected " +
               std::to_string(to_ns(at));
      if (i.exit <= i.enter) return "node " + to_string(id) + ": empty or inverted interval";
      at = i.exit;
    }
    if (at != horizon) return "node " + to_string(id) + ": intervals end at " + std::to_string(to_ns(at));
  }
  return std::nullopt;
}

double ftth_baseline_joules(const std::vector<StateInterval>& mfu, const PowerProfile& profile) {
  long double sum = 0;
  for (const StateInterval& i : mfu) {
    const PowerState s = i.state == PowerState::Active ? PowerState::Active : PowerState::Idle;
    sum += static_cast<long double>(to_ns(i.exit - i.enter)) * 1e-9L * profile.ftth[s];
  }
  return static_cast<double>(sum);
}

}  // namespace fttr::energy
