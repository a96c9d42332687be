// Validation metrics: reference-list correlation and distribution diagnostics.

#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <vector>

#include "ingest.hpp"
#include "types.hpp"

namespace liquidrank {

/// Expected reputation per participant: 0.0 for known-bad, 1.0 for known-good.
struct ReferenceList {
    std::map<ParticipantId, double> labels;
};

inline ReferenceList parse_reference(std::istream& in) {
    ReferenceList ref;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "participant,label") continue;
        auto fields = detail::split_csv_line(line, line_no);
        if (fields.size() != 2) throw InputError("expected participant,label", line_no);
        const double label = detail::parse_double(fields[1], "label", line_no);
        if (label != 0.0 && label != 1.0) throw InputError("label must be 0.0 or 1.0", line_no);
        if (!ref.labels.emplace(ParticipantId(fields[0]), label).second)
            throw InputError("duplicate participant '" + fields[0] + "'", line_no);
    }
    return ref;
}

enum class MissingPolicy {
    ScoreDefault,  // participants absent from the computed state count at the default reputation
    Exclude,       // only participants present in both are correlated
};

namespace detail {

inline double pearson_series(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("undefined correlation: constant series");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace detail

/// Pearson correlation between reference labels and computed reputations.
inline double pearson(const ReferenceList& reference, const ReputationState& computed, double default_reputation,
                      MissingPolicy policy = MissingPolicy::ScoreDefault) {
    std::vector<double> x, y;
    for (const auto& [id, label] : reference.labels) {
        auto it = computed.values.find(id);
        if (it == computed.values.end() && policy == MissingPolicy::Exclude) continue;
        x.push_back(label);
        y.push_back(it == computed.values.end() ? default_reputation : it->second);
    }
    if (x.size() < 2) throw UndefinedCorrelation("undefined correlation: fewer than two participants");
    return detail::pearson_series(x, y);
}

struct DistributionStats {
    double gini = 0.0;
    double top_share = 0.0;  // share of the total held by the top 1% (rounded up)
    double nonzero_fraction = 0.0;
};

/// Gini coefficient of non-negative values; 0 for an all-zero input.
inline double gini(std::vector<double> values) {
    if (values.empty()) throw InputError("gini of an empty distribution is undefined");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    double total = 0.0, ranked = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        total += values[i];
        ranked += static_cast<double>(i + 1) * values[i];
    }
    if (total == 0.0) return 0.0;
    // Sorted-rank form of sum_ij |x_i - x_j| / (2 n^2 mean).
    return std::max(0.0, (2.0 * ranked) / (n * total) - (n + 1.0) / n);
}

inline DistributionStats distribution_stats(const ReputationState& state) {
    if (state.values.empty()) throw InputError("distribution of an empty state is undefined");
    std::vector<double> v;
    v.reserve(state.values.size());
    for (const auto& [_, r] : state.values) v.push_back(r);

    DistributionStats s;
    s.gini = gini(v);
    std::sort(v.begin(), v.end(), std::greater<>());
    const std::size_t top = (v.size() + 99) / 100;
    double total = 0.0, head = 0.0;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        total += v[i];
        if (i < top) head += v[i];
        if (v[i] > 0.0) ++nonzero;
    }
    s.top_share = total == 0.0 ? 0.0 : head / total;
    s.nonzero_fraction = static_cast<double>(nonzero) / static_cast<double>(v.size());
    return s;
}

}  // namespace liquidrank
