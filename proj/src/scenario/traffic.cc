// SPDX-License-Identifier: Apache-2.0
#include "fttr/scenario/traffic.h"

namespace fttr::scenario {

TrafficSource::TrafficSource(const FlowSpec& spec, std::uint64_t seed)
    : spec_{spec}, rng_{seed, flow_substream(spec.id)} {
  if (spec_.model != ArrivalModel::Batch) {
    const std::uint64_t mean = (std::uint64_t{spec_.size_min} + spec_.size_max) / 2;
    interval_ = std::max(Duration{1}, spec_.rate.transmit_time(mean));
  }
  next_ = spec_.start;
  if (spec_.model == ArrivalModel::Batch) batch_left_ = spec_.batch_count;
  if (spec_.stop && *next_ >= *spec_.stop) next_.reset();
}

std::uint32_t TrafficSource::draw_size() {
  if (spec_.size_min == spec_.size_max) return spec_.size_min;
  return static_cast<std::uint32_t>(rng_.uniform(spec_.size_min, spec_.size_max));
}

void TrafficSource::advance() {
  SimTime t = *next_;
  switch (spec_.model) {
    case ArrivalModel::Constant: t += interval_; break;
    case ArrivalModel::OnOff: {
      t += interval_;
      const Duration period = spec_.on + spec_.off;
      const Duration phase = (t - spec_.start) % period;
      if (phase >= spec_.on) t += period - phase;
      break;
    }
    case ArrivalModel::Batch:
      if (--batch_left_ > 0) break;
      if (spec_.batch_interval.count() == 0) {
        next_.reset();
        return;
      }
      batch_left_ = spec_.batch_count;
      t += spec_.batch_interval;
      break;
  }
  if (spec_.stop && t >= *spec_.stop) {
    next_.reset();
    return;
  }
  next_ = t;
}

void TrafficSource::pull(SimTime until, std::vector<Arrival>& out) {
  while (next_ && *next_ <= until) {
    out.push_back({*next_, draw_size()});
    advance();
  }
}

}  // namespace fttr::scenario
