// Brute-force reference implementations used only by tests.
//
// These recompute every differential directly from the closed-form sums,
// scanning the full record list once per output entry. They share no code
// with the engine.

#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <liquidrank/types.hpp>

namespace oracle {

using namespace liquidrank;

struct Params {
    double default_reputation = 0.5;
    double floor = 0.0;
    std::map<std::string, double> h;
    double h_default = 1.0;
    bool log_financial = false;
};

inline long double rj(const ReputationState& prev, const ParticipantId& j, const Params& p) {
    auto it = prev.values.find(j);
    long double r = it == prev.values.end() ? p.default_reputation : it->second;
    return r < p.floor ? p.floor : r;
}

inline long double h_of(const std::string& aspect, const Params& p) {
    auto it = p.h.find(aspect);
    return it == p.h.end() ? p.h_default : it->second;
}

// Per-record base weight (Q, G, or log-normalized G). The log batch maximum
// runs over records whose rater carries weight.
inline std::vector<long double> base_weights(const std::vector<RatingRecord>& recs, RatingKind kind, const Params& p,
                                             const ReputationState& prev) {
    std::vector<long double> w(recs.size(), 0.0L);
    long double top = 0.0L;
    for (std::size_t n = 0; n < recs.size(); ++n) {
        if (recs[n].kind != kind) continue;
        if (kind == RatingKind::Transaction && p.log_financial) {
            w[n] = std::log10(1.0L + recs[n].weight);
            if (rj(prev, recs[n].rater, p) > 0.0L) top = std::max(top, w[n]);
        } else {
            w[n] = recs[n].weight;
        }
    }
    if (kind == RatingKind::Transaction && p.log_financial)
        for (auto& v : w) v = top == 0.0L ? 0.0L : v / top;
    return w;
}

// A record contributes iff it has the right kind, is not a revoked stake, and
// carries positive combined weight.
inline bool contributes(const RatingRecord& r, RatingKind kind, long double w) {
    if (r.kind != kind) return false;
    if (kind == RatingKind::Stake && r.value == 0.0) return false;
    return w > 0.0L;
}

template <class Match>
std::optional<double> literal_formula(const std::vector<RatingRecord>& recs, RatingKind kind,
                                      const ReputationState& prev, const Params& p, Match match) {
    const auto base = base_weights(recs, kind, p, prev);
    std::set<std::optional<std::string>> aspects;
    long double den = 0.0L;
    for (std::size_t n = 0; n < recs.size(); ++n) {
        const long double w = base[n] * rj(prev, recs[n].rater, p);
        if (!contributes(recs[n], kind, w) || !match(recs[n])) continue;
        aspects.insert(recs[n].aspect);
        den += w;
    }
    if (den == 0.0L) return std::nullopt;
    const bool labelled = std::any_of(aspects.begin(), aspects.end(), [](const auto& a) { return a.has_value(); });
    if (!labelled) {
        long double num = 0.0L;
        for (std::size_t n = 0; n < recs.size(); ++n) {
            const long double w = base[n] * rj(prev, recs[n].rater, p);
            if (contributes(recs[n], kind, w) && match(recs[n])) num += recs[n].value * w;
        }
        return static_cast<double>(num / den);
    }
    std::set<std::string> keys;
    for (const auto& a : aspects) keys.insert(a.value_or(""));
    long double weighted = 0.0L, h_total = 0.0L;
    for (const auto& k : keys) {
        long double num = 0.0L;
        for (std::size_t n = 0; n < recs.size(); ++n) {
            const long double w = base[n] * rj(prev, recs[n].rater, p);
            if (contributes(recs[n], kind, w) && match(recs[n]) && recs[n].aspect.value_or("") == k)
                num += recs[n].value * w;
        }
        weighted += h_of(k, p) * num;
        h_total += h_of(k, p);
    }
    return static_cast<double>(weighted / den / h_total);
}

template <class Match>
std::optional<double> plain_mean(const std::vector<RatingRecord>& recs, const ReputationState& prev, const Params& p,
                                 Match match) {
    const auto base = base_weights(recs, RatingKind::Transaction, p, prev);
    long double num = 0.0L, den = 0.0L;
    for (std::size_t n = 0; n < recs.size(); ++n) {
        const long double w = base[n] * rj(prev, recs[n].rater, p);
        if (!contributes(recs[n], RatingKind::Transaction, w) || !match(recs[n])) continue;
        num += recs[n].value * w;
        den += w;
    }
    if (den == 0.0L) return std::nullopt;
    return static_cast<double>(num / den);
}

inline std::set<ParticipantId> ratees(const std::vector<RatingRecord>& recs) {
    std::set<ParticipantId> out;
    for (const auto& r : recs) out.insert(r.ratee);
    return out;
}

inline std::map<ParticipantId, double> differential(const std::vector<RatingRecord>& recs, RatingKind kind,
                                                    const ReputationState& prev, const Params& p) {
    std::map<ParticipantId, double> out;
    for (const auto& i : ratees(recs))
        if (auto v = literal_formula(recs, kind, prev, p, [&](const RatingRecord& r) { return r.ratee == i; }))
            out.emplace(i, *v);
    return out;
}

struct Facets {
    std::map<std::pair<ParticipantId, std::string>, double> by_category, by_aspect;
    std::map<std::tuple<ParticipantId, std::string, std::string>, double> by_aspect_category;
};

inline Facets faceted(const std::vector<RatingRecord>& recs, const ReputationState& prev, const Params& p) {
    std::set<std::string> cats, asps;
    for (const auto& r : recs) {
        cats.insert(r.category.value_or(""));
        asps.insert(r.aspect.value_or(""));
    }
    Facets f;
    for (const auto& i : ratees(recs)) {
        for (const auto& c : cats) {
            auto v = literal_formula(recs, RatingKind::Transaction, prev, p, [&](const RatingRecord& r) {
                return r.ratee == i && r.category.value_or("") == c;
            });
            if (v) f.by_category.emplace(std::pair{i, c}, *v);
        }
        for (const auto& k : asps) {
            auto v = plain_mean(recs, prev, p,
                                [&](const RatingRecord& r) { return r.ratee == i && r.aspect.value_or("") == k; });
            if (v) f.by_aspect.emplace(std::pair{i, k}, *v);
            for (const auto& c : cats) {
                auto vc = plain_mean(recs, prev, p, [&](const RatingRecord& r) {
                    return r.ratee == i && r.aspect.value_or("") == k && r.category.value_or("") == c;
                });
                if (vc) f.by_aspect_category.emplace(std::tuple{i, k, c}, *vc);
            }
        }
    }
    return f;
}

/// Pearson coefficient from the textbook covariance definition.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const long double n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
    }
    const long double cov = sxy / n - (sx / n) * (sy / n);
    const long double vx = sxx / n - (sx / n) * (sx / n);
    const long double vy = syy / n - (sy / n) * (sy / n);
    return static_cast<double>(cov / std::sqrt(vx * vy));
}

/// Gini from the pairwise mean absolute difference.
inline double gini(const std::vector<double>& v) {
    long double diff = 0, total = 0;
    for (double a : v) {
        total += a;
        for (double b : v) diff += std::fabs(a - b);
    }
    const long double n = static_cast<long double>(v.size());
    return total == 0 ? 0.0 : static_cast<double>(diff / (2 * n * total));
}

}  // namespace oracle
