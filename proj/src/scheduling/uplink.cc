// SPDX-License-Identifier: Apache-2.0
#include "fttr/scheduling/uplink.h"

namespace fttr::scheduling {

std::optional<UplinkBwRequest> ofdma_request(NodeId sfu, std::span<const RuAssignment> rus,
                                             std::uint64_t per_sta_overhead) {
  std::uint64_t total = 0;
  for (const RuAssignment& ru : rus) total += ru.ru_bytes + per_sta_overhead;
  if (rus.empty() || total == 0) return std::nullopt;
  return UplinkBwRequest{sfu, total, frames::kDataTcont, std::nullopt};
}

std::uint64_t phy_relay_bytes(Duration air, std::uint64_t samples_per_second, std::uint32_t bits_per_sample) {
  if (air.count() <= 0) return 0;
  const unsigned __int128 bits = static_cast<unsigned __int128>(air.count()) * samples_per_second * bits_per_sample;
  constexpr unsigned __int128 kDen = 8'000'000'000u;
  return static_cast<std::uint64_t>((bits + kDen - 1) / kDen);
}

Duration phy_relay_slot(std::uint64_t bytes, DataRate optical_upstream) { return optical_upstream.transmit_time(bytes); }

}  // namespace fttr::scheduling
