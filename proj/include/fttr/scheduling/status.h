// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

#include "fttr/scheduling/types.h"

namespace fttr::scheduling {

/// MFU-side store of the latest report per SFU. A report older than two
/// status cycles is stale and excluded from planning.
class StatusCollector {
 public:
  explicit StatusCollector(Duration cycle) : cycle_{cycle} {}

  void record(const SfuStatusReport& r) {
    latest_[r.sfu] = r;
    ++received_;
  }

  bool stale(NodeId sfu, SimTime now) const {
    auto it = latest_.find(sfu);
    return it == latest_.end() || now - it->second.timestamp > 2 * cycle_;
  }

  /// Fresh reports in NodeId order.
  std::vector<SfuStatusReport> fresh(SimTime now) const {
    std::vector<SfuStatusReport> out;
    for (const auto& [sfu, r] : latest_)
      if (!stale(sfu, now)) out.push_back(r);
    return out;
  }

  std::uint64_t received() const { return received_; }
  Duration cycle() const { return cycle_; }

 private:
  Duration cycle_;
  std::map<NodeId, SfuStatusReport> latest_;
  std::uint64_t received_ = 0;
};

}  // namespace fttr::scheduling
