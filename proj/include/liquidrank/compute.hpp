// Window-by-window orchestration of the engine over a partitioned log.

#pragma once

#include <vector>

#include "engine.hpp"
#include "ingest.hpp"

namespace liquidrank {

/// Runs the pipeline over every window in order, starting from `initial`
/// (an empty state at t_origin by default).
///
/// The state clock advances to each window's end, and by at least one unit per
/// window, so windows that share a timestamp (PerTransaction / PerBlock on ties)
/// still form a strictly increasing sequence of snapshots.
inline std::vector<PipelineResult> compute_windows(const Partition& partition, Epoch t_origin, const EngineConfig& cfg,
                                                   std::optional<ReputationState> initial = std::nullopt) {
    cfg.validate();
    ReputationState state = initial.value_or(ReputationState{t_origin, {}});
    if (state.at < t_origin) throw InputError("initial state precedes origin");
    std::vector<PipelineResult> out;
    out.reserve(partition.windows.size());
    for (std::size_t w = 0; w < partition.windows.size(); ++w) {
        const Epoch t_prev = state.at;
        const TimeWindow window{t_origin, t_prev, std::max(partition.windows[w].end, t_prev + 1)};
        out.push_back(run_pipeline(partition.slice(w), state, window, cfg));
        state = out.back().state;
    }
    return out;
}

inline std::vector<PipelineResult> compute_log(std::vector<RatingRecord> records, const WindowMode& mode,
                                               Epoch t_origin, const EngineConfig& cfg) {
    return compute_windows(partition(std::move(records), mode, t_origin), t_origin, cfg);
}

}  // namespace liquidrank
