#include "ccnsim/strategy.hpp"

#include <algorithm>
#include <cassert>

namespace ccnsim {

int FaceStats::data_returned_window(TimeUs now, TimeUs window_us)
{
  while (!data_arrivals.empty() && data_arrivals.front() + window_us < now) {
    data_arrivals.pop_front();
  }
  return static_cast<int>(data_arrivals.size());
}

std::optional<StrategyKind> strategy_from_name(const std::string& name)
{
  if (name == "default") return StrategyKind::Default;
  if (name == "loadsharing") return StrategyKind::Loadsharing;
  if (name == "parallel") return StrategyKind::Parallel;
  if (name == "bif-local") return StrategyKind::BifLocal;
  if (name == "adaptive") return StrategyKind::Adaptive;
  return std::nullopt;
}

std::string strategy_name(StrategyKind kind)
{
  switch (kind) {
    case StrategyKind::Default: return "default";
    case StrategyKind::Loadsharing: return "loadsharing";
    case StrategyKind::Parallel: return "parallel";
    case StrategyKind::BifLocal: return "bif-local";
    case StrategyKind::Adaptive: return "adaptive";
  }
  return "default";
}

static double clamp_rte(double rte, const StrategyConfig& cfg)
{
  return std::clamp(rte, cfg.rte_min_ms, cfg.rte_max_ms);
}

void rte_on_data(FaceStats& stats, const StrategyConfig& cfg, double delay_sample_ms,
                 TimeUs now)
{
  stats.rte_ms = clamp_rte(stats.rte_ms * (1.0 - cfg.rte_decrease_factor), cfg);
  stats.pending = std::max(0, stats.pending - 1);
  if (stats.data_total == 0 && stats.delay_ewma_ms == 0.0) {
    stats.delay_ewma_ms = delay_sample_ms;
  }
  else {
    stats.delay_ewma_ms += cfg.delay_ewma_alpha * (delay_sample_ms - stats.delay_ewma_ms);
  }
  stats.data_total++;
  stats.data_arrivals.push_back(now);
}

void rte_on_timeout(FaceStats& stats, const StrategyConfig& cfg)
{
  stats.rte_ms = clamp_rte(stats.rte_ms * (1.0 + cfg.rte_increase_factor), cfg);
  stats.pending = std::max(0, stats.pending - 1);
  stats.timeouts++;
}

namespace {

// Deterministic tie-break: lowest FaceId wins.
template <typename Key>
const FaceStats* argmin(const std::vector<FaceStats>& stats, Key key)
{
  const FaceStats* best = nullptr;
  for (const FaceStats& s : stats) {
    if (best == nullptr || key(s) < key(*best) ||
        (key(s) == key(*best) && s.face < best->face)) {
      best = &s;
    }
  }
  return best;
}

}  // namespace

StrategyDecision default_select(const std::vector<FaceStats>& stats,
                                const StrategyConfig& cfg, Rng& rng)
{
  assert(!stats.empty());
  std::vector<const FaceStats*> order;
  order.reserve(stats.size());
  for (const FaceStats& s : stats) {
    order.push_back(&s);
  }
  std::sort(order.begin(), order.end(), [](const FaceStats* a, const FaceStats* b) {
    return a->rte_ms != b->rte_ms ? a->rte_ms < b->rte_ms : a->face < b->face;
  });

  StrategyDecision decision;
  decision.rationale = Rationale::BestFace;
  decision.sends.push_back({order[0]->face, 0});
  std::uniform_real_distribution<double> jitter(0.0, cfg.stagger_jitter_max_ms);
  double offset_ms = order[0]->rte_ms;
  for (std::size_t i = 1; i < order.size(); ++i) {
    offset_ms += jitter(rng);
    decision.sends.push_back({order[i]->face, ms_to_us(offset_ms)});
  }
  return decision;
}

StrategyDecision loadsharing_select(const std::vector<FaceStats>& stats)
{
  assert(!stats.empty());
  const FaceStats* best = argmin(stats, [](const FaceStats& s) { return s.pending; });
  return {{{best->face, 0}}, Rationale::LoadShare};
}

StrategyDecision parallel_select(const std::vector<FaceStats>& stats)
{
  assert(!stats.empty());
  StrategyDecision decision;
  decision.rationale = Rationale::Flood;
  for (const FaceStats& s : stats) {
    decision.sends.push_back({s.face, 0});
  }
  return decision;
}

StrategyDecision bif_local_first_select(const std::vector<FaceStats>& stats,
                                        const StrategyConfig& cfg)
{
  assert(!stats.empty());
  std::vector<const FaceStats*> order;
  for (const FaceStats& s : stats) {
    order.push_back(&s);
  }
  std::sort(order.begin(), order.end(), [](const FaceStats* a, const FaceStats* b) {
    return a->cost != b->cost ? a->cost < b->cost : a->face < b->face;
  });

  StrategyDecision decision;
  decision.rationale = Rationale::LocalFirst;
  decision.sends.push_back({order[0]->face, 0});
  if (order.size() > 1) {
    double wait_ms = cfg.local_wait_ms > 0.0 ? cfg.local_wait_ms : 2.0 * order[0]->rte_ms;
    decision.sends.push_back({order[1]->face, ms_to_us(wait_ms)});
  }
  return decision;
}

StrategyDecision adaptive_select(std::vector<FaceStats> stats, const AppRequirements& reqs,
                                 const StrategyConfig& cfg, AdaptiveState& state, TimeUs now)
{
  assert(!stats.empty());

  std::vector<FaceStats> budget;
  for (const FaceStats& s : stats) {
    if (!reqs.max_cost || s.cost <= *reqs.max_cost) {
      budget.push_back(s);
    }
  }
  if (budget.empty()) {
    // Cost filter left nothing: relax to the single cheapest face.
    const FaceStats* cheapest = argmin(stats, [](const FaceStats& s) { return s.cost; });
    return {{{cheapest->face, 0}}, Rationale::CostConstrained};
  }

  const TimeUs window_us = ms_to_us(cfg.adaptive.throughput_window_ms);

  bool constraint_met = true;
  if (reqs.preference == MetricPreference::Delay && reqs.delay_target_ms) {
    constraint_met = false;
    for (FaceStats& s : budget) {
      if (s.delay_ewma_ms <= *reqs.delay_target_ms) {
        constraint_met = true;
        break;
      }
    }
  }

  if (!state.flooding) {
    if (!constraint_met) {
      state.consecutive_violations++;
      if (state.consecutive_violations >= cfg.adaptive.flood_trigger) {
        state.flooding = true;
        state.satisfied_since.reset();
      }
    }
    else {
      state.consecutive_violations = 0;
    }
  }
  else {
    if (constraint_met) {
      if (!state.satisfied_since) {
        state.satisfied_since = now;
      }
      else if (now - *state.satisfied_since >= ms_to_us(cfg.adaptive.calm_down_ms)) {
        state.flooding = false;
        state.consecutive_violations = 0;
        state.satisfied_since.reset();
      }
    }
    else {
      state.satisfied_since.reset();
    }
  }

  if (state.flooding) {
    StrategyDecision decision;
    decision.rationale = Rationale::Flood;
    for (const FaceStats& s : budget) {
      decision.sends.push_back({s.face, 0});
    }
    return decision;
  }

  switch (reqs.preference) {
    case MetricPreference::Throughput: {
      const FaceStats* best = nullptr;
      int best_window = -1;
      for (FaceStats& s : budget) {
        int w = s.data_returned_window(now, window_us);
        if (best == nullptr || w > best_window || (w == best_window && s.face < best->face)) {
          best = &s;
          best_window = w;
        }
      }
      return {{{best->face, 0}}, Rationale::BestFace};
    }
    case MetricPreference::Delay: {
      const FaceStats* best = nullptr;
      for (const FaceStats& s : budget) {
        bool meets = !reqs.delay_target_ms || s.delay_ewma_ms <= *reqs.delay_target_ms;
        if (!meets) {
          continue;
        }
        if (best == nullptr || s.cost < best->cost ||
            (s.cost == best->cost && s.face < best->face)) {
          best = &s;
        }
      }
      if (best == nullptr) {
        // Constraint currently unmet, not yet flooding: best effort.
        best = argmin(budget, [](const FaceStats& s) { return s.delay_ewma_ms; });
      }
      return {{{best->face, 0}}, Rationale::BestFace};
    }
    case MetricPreference::Loss: {
      // Parallel redundancy across the two lowest-loss faces.
      auto loss_rate = [](const FaceStats& s) {
        return static_cast<double>(s.timeouts) /
               static_cast<double>(std::max<long>(1, s.data_total + s.timeouts));
      };
      std::sort(budget.begin(), budget.end(), [&](const FaceStats& a, const FaceStats& b) {
        double la = loss_rate(a);
        double lb = loss_rate(b);
        return la != lb ? la < lb : a.face < b.face;
      });
      StrategyDecision decision;
      decision.rationale = Rationale::Flood;
      for (std::size_t i = 0; i < budget.size() && i < 2; ++i) {
        decision.sends.push_back({budget[i].face, 0});
      }
      return decision;
    }
  }
  return {{{budget[0].face, 0}}, Rationale::BestFace};
}

}  // namespace ccnsim
