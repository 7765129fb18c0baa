// SPDX-License-Identifier: Apache-2.0
#include "fttr/management/mib.h"

namespace fttr::management {

namespace ot = frames::omci_type;
namespace orr = frames::omci_result;

bool known_entity_class(std::uint16_t cls) { return cls >= 1 && cls <= 5; }

const char* to_string(EntityClass c) {
  switch (c) {
    case EntityClass::DeviceInfo: return "device_info";
    case EntityClass::WifiConfig: return "wifi_config";
    case EntityClass::QosPolicy: return "qos_policy";
    case EntityClass::PowerPolicy: return "power_policy";
    case EntityClass::Counters: return "counters";
  }
  return "unknown";
}

MibStore::MibStore(NodeId owner) : owner_{owner} {
  for (std::uint16_t cls = 1; cls <= 5; ++cls) entities_[{cls, 0}] = {};
}

bool MibStore::set(std::uint16_t cls, std::uint16_t inst, frames::Bytes blob) {
  if (!known_entity_class(cls)) return false;
  entities_[{cls, inst}] = std::move(blob);
  ++mutations_;
  return true;
}

std::optional<frames::Bytes> MibStore::get(std::uint16_t cls, std::uint16_t inst) const {
  auto it = entities_.find({cls, inst});
  if (it == entities_.end()) return std::nullopt;
  return it->second;
}

frames::OmciMessage MibStore::apply(const frames::OmciMessage& req) {
  frames::OmciMessage resp;
  resp.transaction_id = req.transaction_id;
  resp.msg_type = static_cast<std::uint8_t>(req.msg_type | ot::kResponseBit);
  resp.device_flags = req.device_flags;
  resp.entity_class = req.entity_class;
  resp.entity_instance = req.entity_instance;

  std::uint8_t result = orr::kSuccess;
  frames::Bytes blob;
  switch (req.msg_type) {
    case ot::kCreate:
    case ot::kSet:
      if (!set(req.entity_class, req.entity_instance, req.content)) result = orr::kUnknownEntity;
      break;
    case ot::kGet:
      if (auto v = get(req.entity_class, req.entity_instance))
        blob = std::move(*v);
      else
        result = orr::kUnknownEntity;
      break;
    default: result = orr::kProcessingError;
  }
  resp.content.push_back(result);
  resp.content.insert(resp.content.end(), blob.begin(), blob.end());
  return resp;
}

}  // namespace fttr::management
