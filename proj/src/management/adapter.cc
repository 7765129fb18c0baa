// SPDX-License-Identifier: Apache-2.0
#include "fttr/management/adapter.h"

#include <stdexcept>

namespace fttr::management {

void OmciAdapter::register_sfu(std::uint8_t sfu_id, NodeId node) {
  if (by_id_.count(sfu_id) || by_node_.count(node)) throw std::invalid_argument{"adapter mapping must be injective"};
  by_id_[sfu_id] = node;
  by_node_[node] = sfu_id;
}

std::optional<std::uint8_t> OmciAdapter::sfu_id(NodeId node) const {
  auto it = by_node_.find(node);
  if (it == by_node_.end()) return std::nullopt;
  return it->second;
}

OmciAdapter::Downstream OmciAdapter::route_downstream(const frames::OmciMessage& extended) {
  Downstream out;
  const auto route = extended.route;
  auto it = route && route->mfu_port == port_ ? by_id_.find(route->sfu_id) : by_id_.end();
  if (it == by_id_.end()) {
    ++unknown_targets_;
    frames::OmciMessage err;
    err.transaction_id = extended.transaction_id;
    err.msg_type = static_cast<std::uint8_t>(extended.msg_type | frames::omci_type::kResponseBit);
    err.device_flags = extended.device_flags;
    err.entity_class = extended.entity_class;
    err.entity_instance = extended.entity_instance;
    err.content = {frames::omci_result::kUnknownTarget};
    err.route = route ? route : frames::OmciRoute{port_, 0};
    out.message = std::move(err);
    return out;
  }
  ++routed_down_;
  out.target = it->second;
  out.message = extended;
  out.message.route.reset();
  return out;
}

std::optional<frames::OmciMessage> OmciAdapter::route_upstream(const frames::OmciMessage& standard, NodeId from) {
  auto it = by_node_.find(from);
  if (it == by_node_.end()) {
    ++dropped_up_;
    return std::nullopt;
  }
  ++routed_up_;
  frames::OmciMessage ext = standard;
  ext.route = frames::OmciRoute{port_, it->second};
  return ext;
}

}  // namespace fttr::management
