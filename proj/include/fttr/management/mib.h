// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

#include "fttr/frames/omci.h"
#include "fttr/sim/time.h"

namespace fttr::management {

/// Minimal managed-entity catalogue.
enum class EntityClass : std::uint16_t { DeviceInfo = 1, WifiConfig = 2, QosPolicy = 3, PowerPolicy = 4, Counters = 5 };

bool known_entity_class(std::uint16_t cls);
const char* to_string(EntityClass c);

/// Attribute blobs keyed by (entity_class, entity_instance).
class MibStore {
 public:
  using Key = std::pair<std::uint16_t, std::uint16_t>;

  /// Seeds instance 0 of every catalogue class.
  explicit MibStore(NodeId owner);

  NodeId owner() const { return owner_; }

  /// Upsert; false for a class outside the catalogue.
  bool set(std::uint16_t cls, std::uint16_t inst, frames::Bytes blob);
  /// nullopt for an unknown entity.
  std::optional<frames::Bytes> get(std::uint16_t cls, std::uint16_t inst) const;

  /// Executes a standard-form request and builds its response: the request
  /// type with the response bit, content = result byte (+ blob for Get).
  frames::OmciMessage apply(const frames::OmciMessage& request);

  const std::map<Key, frames::Bytes>& entities() const { return entities_; }
  std::uint64_t mutations() const { return mutations_; }

 private:
  NodeId owner_;
  std::map<Key, frames::Bytes> entities_;
  std::uint64_t mutations_ = 0;
};

}  // namespace fttr::management
