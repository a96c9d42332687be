// LiquidRank reputation formulas, applied one window at a time.
//
// Every function here is pure. Sums run in sorted-participant order (std::map)
// and input order within a participant, so identical inputs always produce
// bit-identical outputs.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "types.hpp"

namespace liquidrank {

struct EngineConfig {
    double default_reputation = 0.5;
    std::map<std::string, double> aspect_weights;
    double default_aspect_weight = 1.0;
    double blend_stake = 1.0;
    double blend_transaction = 1.0;
    bool use_log_financial = false;
    bool use_log_differential = false;
    double decay_recent = 1.0;
    double decay_past = 1.0;
    double rater_weight_floor = 0.0;

    /// Weight H_k of an aspect; records without an aspect use the default weight.
    double aspect_weight(const std::string& aspect) const {
        auto it = aspect_weights.find(aspect);
        return it == aspect_weights.end() ? default_aspect_weight : it->second;
    }

    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(default_reputation) || default_reputation < 0.0 || default_reputation > 1.0)
            throw ConfigError("default_reputation must lie in [0, 1]");
        for (const auto& [aspect, w] : aspect_weights)
            if (!finite(w) || w <= 0.0) throw ConfigError("aspect weight for '" + aspect + "' must be positive");
        if (!finite(default_aspect_weight) || default_aspect_weight <= 0.0)
            throw ConfigError("default_aspect_weight must be positive");
        if (!finite(blend_stake) || !finite(blend_transaction) || blend_stake < 0.0 || blend_transaction < 0.0)
            throw ConfigError("blend weights must be finite and non-negative");
        if (blend_stake + blend_transaction <= 0.0) throw ConfigError("blend_stake + blend_transaction must be positive");
        if (!finite(decay_recent) || !finite(decay_past) || decay_recent <= 0.0 || decay_past <= 0.0)
            throw ConfigError("decay coefficients must be positive");
        if (!finite(rater_weight_floor) || rater_weight_floor < 0.0)
            throw ConfigError("rater_weight_floor must be non-negative");
    }
};

/// Log-scales a batch of financial values: log10(1 + w) / max(log10(1 + w)).
namespace detail {

// Extended-precision form used inside the engine.
inline std::vector<long double> normalize_financial_wide(std::span<const double> weights) {
    std::vector<long double> out;
    out.reserve(weights.size());
    long double top = 0.0L;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("financial weight must be finite and non-negative");
        out.push_back(std::log10(1.0L + w));
        top = std::max(top, out.back());
    }
    if (top == 0.0L) {
        std::fill(out.begin(), out.end(), 0.0L);
        return out;
    }
    for (long double& v : out) v /= top;
    return out;
}

}  // namespace detail

inline std::vector<double> normalize_financial(std::span<const double> weights) {
    const auto wide = detail::normalize_financial_wide(weights);
    return {wide.begin(), wide.end()};
}

/// Effective weight of a rater: its previous reputation, raised to the floor.
inline double rater_weight(const ReputationState& prev, const ParticipantId& rater, const EngineConfig& cfg) {
    return std::max(prev.get(rater, cfg.default_reputation), cfg.rater_weight_floor);
}

namespace detail {

// One record together with its combined weight (Q or G) * R_j.
struct Contribution {
    const RatingRecord* record;
    long double weight;
};

// Rounding can leave a mean one ulp outside the range of its inputs; the
// result is clamped back to [min value, max value].
inline std::optional<double> weighted_mean(std::span<const Contribution> group) {
    long double num = 0.0L;
    long double den = 0.0L;
    double lo = 1.0;
    double hi = -1.0;
    for (const auto& c : group) {
        num += c.record->value * c.weight;
        den += c.weight;
        lo = std::min(lo, c.record->value);
        hi = std::max(hi, c.record->value);
    }
    if (den == 0.0L) return std::nullopt;
    return std::clamp(static_cast<double>(num / den), lo, hi);
}

// Aspect-blended weighted mean of one group of contributions.
//
// With aspects: sum_k(H_k * sum(v * w over aspect k)) / sum(w) / sum_k(H_k), the
// denominator taken over every contribution regardless of aspect. Without any
// aspect label this is the plain weighted mean sum(v * w) / sum(w).
inline std::optional<double> aspect_blended_mean(std::span<const Contribution> group, const EngineConfig& cfg) {
    bool any_aspect = std::any_of(group.begin(), group.end(),
                                  [](const Contribution& c) { return c.record->aspect.has_value(); });
    long double den = 0.0L;
    if (!any_aspect) {
        return weighted_mean(group);
    }
    std::map<std::string, long double> num_by_aspect;
    double lo = 1.0;
    double hi = -1.0;
    for (const auto& c : group) {
        num_by_aspect[c.record->aspect.value_or(std::string{})] += c.record->value * c.weight;
        den += c.weight;
        lo = std::min(lo, c.record->value);
        hi = std::max(hi, c.record->value);
    }
    if (den == 0.0L) return std::nullopt;
    long double weighted = 0.0L;
    long double h_total = 0.0L;
    for (const auto& [aspect, num] : num_by_aspect) {
        const long double h = cfg.aspect_weight(aspect);
        weighted += h * num;
        h_total += h;
    }
    // One group is the plain mean; several groups are a convex mix of partial
    // means, each between min(0, lo) and max(0, hi).
    if (num_by_aspect.size() > 1) {
        lo = std::min(lo, 0.0);
        hi = std::max(hi, 0.0);
    }
    return std::clamp(static_cast<double>(weighted / den / h_total), lo, hi);
}


// Contributions of one rating kind, with zero-weight entries dropped so they
// cannot introduce an aspect group or change any denominator.
inline std::vector<Contribution> contributions(std::span<const RatingRecord> records, RatingKind kind,
                                               const ReputationState& prev, const EngineConfig& cfg) {
    std::vector<const RatingRecord*> selected;
    for (const auto& r : records) {
        if (r.kind != kind) continue;
        if (kind == RatingKind::Stake && r.value == 0.0) continue;  // revoked endorsement
        selected.push_back(&r);
    }
    // Raters without weight are dropped before the financial batch is
    // normalized, so they cannot move its maximum either.
    std::vector<const RatingRecord*> weighted;
    std::vector<double> rater;
    for (const auto* r : selected) {
        const double rw = rater_weight(prev, r->rater, cfg);
        if (rw > 0.0) {
            weighted.push_back(r);
            rater.push_back(rw);
        }
    }
    std::vector<long double> base;
    if (kind == RatingKind::Transaction && cfg.use_log_financial) {
        std::vector<double> raw;
        raw.reserve(weighted.size());
        for (const auto* r : weighted) raw.push_back(r->weight);
        base = normalize_financial_wide(raw);
    } else {
        for (const auto* r : weighted) base.push_back(r->weight);
    }

    std::vector<Contribution> out;
    out.reserve(weighted.size());
    for (std::size_t n = 0; n < weighted.size(); ++n) {
        const long double w = base[n] * rater[n];
        if (w > 0.0L) out.push_back({weighted[n], w});
    }
    return out;
}

template <class Key, class KeyFn>
std::map<Key, std::vector<Contribution>> group_by(const std::vector<Contribution>& all, KeyFn key) {
    std::map<Key, std::vector<Contribution>> groups;
    for (const auto& c : all) groups[key(*c.record)].push_back(c);
    return groups;
}

inline ReputationMap differential(std::span<const RatingRecord> records, RatingKind kind,
                                  const ReputationState& prev, const EngineConfig& cfg) {
    auto groups = group_by<ParticipantId>(contributions(records, kind, prev, cfg),
                                          [](const RatingRecord& r) { return r.ratee; });
    ReputationMap out;
    for (const auto& [ratee, group] : groups)
        if (auto v = aspect_blended_mean(group, cfg)) out.emplace(ratee, *v);
    return out;
}

}  // namespace detail

/// Staked differential dS per ratee. Only Stake records are read.
inline ReputationMap differential_staked(std::span<const RatingRecord> records, const ReputationState& prev,
                                         const EngineConfig& cfg) {
    return detail::differential(records, RatingKind::Stake, prev, cfg);
}

/// Transactional differential dF per ratee. Only Transaction records are read;
/// with use_log_financial the weights are log-scaled over this batch first.
inline ReputationMap differential_transactional(std::span<const RatingRecord> records, const ReputationState& prev,
                                                const EngineConfig& cfg) {
    return detail::differential(records, RatingKind::Transaction, prev, cfg);
}

/// Per-category, per-aspect and per-(aspect, category) transactional differentials.
inline FacetedDifferential faceted_differentials(std::span<const RatingRecord> records, const ReputationState& prev,
                                                 const EngineConfig& cfg, const TimeWindow& window = {}) {
    using detail::Contribution;
    const auto all = detail::contributions(records, RatingKind::Transaction, prev, cfg);
    const auto aspect_of = [](const RatingRecord& r) { return r.aspect.value_or(std::string{}); };
    const auto category_of = [](const RatingRecord& r) { return r.category.value_or(std::string{}); };

    FacetedDifferential out;
    out.window = window;
    using Pair = std::pair<ParticipantId, std::string>;
    using Triple = std::tuple<ParticipantId, std::string, std::string>;
    for (const auto& [key, group] :
         detail::group_by<Pair>(all, [&](const RatingRecord& r) { return Pair{r.ratee, category_of(r)}; }))
        if (auto v = detail::aspect_blended_mean(group, cfg)) out.by_category.emplace(key, *v);
    for (const auto& [key, group] :
         detail::group_by<Pair>(all, [&](const RatingRecord& r) { return Pair{r.ratee, aspect_of(r)}; }))
        if (auto v = detail::weighted_mean(group)) out.by_aspect.emplace(key, *v);
    for (const auto& [key, group] : detail::group_by<Triple>(
             all, [&](const RatingRecord& r) { return Triple{r.ratee, aspect_of(r), category_of(r)}; }))
        if (auto v = detail::weighted_mean(group)) out.by_aspect_category.emplace(key, *v);
    return out;
}

/// Blended differential dP. A participant present in only one input is
/// renormalized over the components it actually has.
inline ReputationMap blend(const ReputationMap& dS, const ReputationMap& dF, const EngineConfig& cfg) {
    if (!(cfg.blend_stake >= 0.0) || !(cfg.blend_transaction >= 0.0) || cfg.blend_stake + cfg.blend_transaction <= 0.0)
        throw ConfigError("blend weights must be non-negative with a positive sum");
    ReputationMap out;
    auto add = [&](const ParticipantId& id) {
        if (out.contains(id)) return;
        double num = 0.0;
        double den = 0.0;
        if (auto s = dS.find(id); s != dS.end()) {
            num += cfg.blend_stake * s->second;
            den += cfg.blend_stake;
        }
        if (auto f = dF.find(id); f != dF.end()) {
            num += cfg.blend_transaction * f->second;
            den += cfg.blend_transaction;
        }
        if (den > 0.0) out.emplace(id, num / den);
    };
    for (const auto& [id, _] : dS) add(id);
    for (const auto& [id, _] : dF) add(id);
    return out;
}

/// Scales the window so that the largest magnitude becomes 1.
inline ReputationMap normalize_window(const ReputationMap& dP) {
    double top = 0.0;
    for (const auto& [_, v] : dP) top = std::max(top, std::abs(v));
    if (top == 0.0) return dP;
    ReputationMap out;
    for (const auto& [id, v] : dP) out.emplace_hint(out.end(), id, v / top);
    return out;
}

/// sign(x) * log10(1 + |x|).
inline double log_scale(double x) {
    if (x == 0.0) return 0.0;
    const double magnitude = std::log1p(std::abs(x)) / std::numbers::ln10;
    return x < 0.0 ? -magnitude : magnitude;
}

inline ReputationMap log_differential(const ReputationMap& dP) {
    ReputationMap out;
    for (const auto& [id, v] : dP) out.emplace_hint(out.end(), id, log_scale(v));
    return out;
}

/// Time-weighted merge of a prior reputation with the window differential,
/// before clamping.
inline double merge_unclamped(double prior, double differential, const TimeWindow& window, const EngineConfig& cfg) {
    const double past = cfg.decay_past * static_cast<double>(window.t_prev - window.t_origin);
    const double recent = cfg.decay_recent * static_cast<double>(window.t_now - window.t_prev);
    if (past == 0.0) return differential;
    // A convex combination; the clamp only removes rounding overshoot.
    return std::clamp((past * prior + recent * differential) / (past + recent), std::min(prior, differential),
                      std::max(prior, differential));
}

inline double clamp_unit(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return v == 0.0 ? 0.0 : v;  // no negative zero in stored state
}

inline ReputationState update_state(const ReputationState& prev, const ReputationMap& P, const TimeWindow& window,
                                    const EngineConfig& cfg) {
    window.validate();
    if (prev.at != window.t_prev) throw InputError("state timestamp does not match window start");
    ReputationState next{window.t_now, prev.values};
    for (const auto& [id, p] : P) {
        const double prior = prev.get(id, cfg.default_reputation);
        next.values.insert_or_assign(id, clamp_unit(merge_unclamped(prior, p, window, cfg)));
    }
    return next;
}

struct PipelineResult {
    ReputationState state;
    DifferentialReputation differential;
};

/// One full window: differentials, blend, optional log, normalization, update.
inline PipelineResult run_pipeline(std::span<const RatingRecord> records, const ReputationState& prev,
                                   const TimeWindow& window, const EngineConfig& cfg) {
    cfg.validate();
    window.validate();
    PipelineResult result;
    auto& diff = result.differential;
    diff.window = window;
    diff.dS = differential_staked(records, prev, cfg);
    diff.dF = differential_transactional(records, prev, cfg);
    ReputationMap dp = blend(*diff.dS, *diff.dF, cfg);
    diff.dP = dp;
    if (cfg.use_log_differential) {
        diff.lP = log_differential(dp);
        dp = *diff.lP;
    }
    diff.P = normalize_window(dp);
    result.state = update_state(prev, *diff.P, window, cfg);
    return result;
}

}  // namespace liquidrank
