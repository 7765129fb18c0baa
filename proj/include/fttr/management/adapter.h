// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "fttr/frames/omci.h"
#include "fttr/sim/time.h"

namespace fttr::management {

/// MFU-resident translator between the extended (routed) OMCI form used
/// towards the OLT and the standard form used on the G.fin side. All SFUs of
/// one MFU share its single port.
class OmciAdapter {
 public:
  explicit OmciAdapter(std::uint8_t mfu_port) : port_{mfu_port} {}

  std::uint8_t port() const { return port_; }

  /// Throws std::invalid_argument if either side is already mapped.
  void register_sfu(std::uint8_t sfu_id, NodeId node);
  bool registered(NodeId node) const { return by_node_.count(node) != 0; }
  std::optional<std::uint8_t> sfu_id(NodeId node) const;

  struct Downstream {
    std::optional<NodeId> target;
    frames::OmciMessage message;  // standard form, or the error response to the OLT
  };
  /// Strips the routing trailer and resolves the target. An unknown
  /// (port, sfu) pair yields no target and an extended error response.
  Downstream route_downstream(const frames::OmciMessage& extended);

  /// Appends (port, sfu_id) identifying the true source. nullopt (and
  /// counted) for an unregistered source.
  std::optional<frames::OmciMessage> route_upstream(const frames::OmciMessage& standard, NodeId from);

  std::uint64_t routed_down() const { return routed_down_; }
  std::uint64_t unknown_targets() const { return unknown_targets_; }
  std::uint64_t routed_up() const { return routed_up_; }
  std::uint64_t dropped_up() const { return dropped_up_; }

 private:
  std::uint8_t port_;
  std::map<std::uint8_t, NodeId> by_id_;
  std::map<NodeId, std::uint8_t> by_node_;
  std::uint64_t routed_down_ = 0;
  std::uint64_t unknown_targets_ = 0;
  std::uint64_t routed_up_ = 0;
  std::uint64_t dropped_up_ = 0;
};

}  // namespace fttr::management
