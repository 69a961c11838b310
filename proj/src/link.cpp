#include "ccnsim/link.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccnsim {

SignalProfile::SignalProfile(std::vector<std::pair<double, double>> breakpoints)
  : points_(std::move(breakpoints))
{
  for (std::size_t i = 0; i < points_.size(); ++i) {
    points_[i].second = std::clamp(points_[i].second, 0.0, 1.0);
    if (i > 0 && points_[i].first < points_[i - 1].first) {
      throw std::invalid_argument("signal profile breakpoints must be time-ordered");
    }
  }
}

SignalProfile SignalProfile::constant(double q)
{
  return SignalProfile({{0.0, q}});
}

double SignalProfile::q_at(double t_ms) const
{
  if (points_.empty()) {
    return 1.0;
  }
  if (t_ms <= points_.front().first) {
    return points_.front().second;
  }
  if (t_ms >= points_.back().first) {
    return points_.back().second;
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (t_ms <= points_[i].first) {
      const auto& [t0, q0] = points_[i - 1];
      const auto& [t1, q1] = points_[i];
      if (t1 == t0) {
        return q1;
      }
      double f = (t_ms - t0) / (t1 - t0);
      return std::clamp(q0 + f * (q1 - q0), 0.0, 1.0);
    }
  }
  return points_.back().second;
}

double LossModel::frame_loss(double q) const
{
  if (fixed) {
    return std::clamp(*fixed, 0.0, 1.0);
  }
  return std::clamp(p_max * std::pow(1.0 - std::clamp(q, 0.0, 1.0), gamma), 0.0, 1.0);
}

double effective_bandwidth(const LinkModel& link, double q)
{
  return link.bandwidth_pkts_per_ms * std::max(std::clamp(q, 0.0, 1.0), link.q_floor);
}

double delivery_probability(const LinkModel& link, double q)
{
  double p = link.loss.frame_loss(q);
  return 1.0 - std::pow(p, static_cast<double>(link.retry_limit + 1));
}

TransmitOutcome transmit(const LinkModel& link, double q, Rng& rng)
{
  double p = link.loss.frame_loss(q);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  TransmitOutcome out;
  out.attempts = link.retry_limit + 1;
  out.delivered = false;
  for (int attempt = 1; attempt <= link.retry_limit + 1; ++attempt) {
    if (uniform(rng) >= p) {
      out.delivered = true;
      out.attempts = attempt;
      break;
    }
  }

  double jitter = 0.0;
  if (link.jitter_ms > 0.0) {
    std::uniform_real_distribution<double> jd(-link.jitter_ms, link.jitter_ms);
    jitter = jd(rng);
  }
  out.total_delay_ms = std::max(0.0, link.base_delay_ms + jitter) +
                       static_cast<double>(out.attempts - 1) * link.per_retry_delay_ms;
  return out;
}

}  // namespace ccnsim
