// Seeded synthetic rating logs for simulations and smoke runs.

#pragma once

#include <random>
#include <vector>

#include "types.hpp"

namespace liquidrank {

struct SyntheticLogSpec {
    std::size_t participants = 12;
    std::size_t ratings = 40;
    Epoch t_begin = 0;
    Epoch t_end = 10;         // timestamps drawn from [t_begin, t_end)
    double stake_fraction = 0.25;
    double weight_sigma = 1.0;  // log-normal sigma of transaction weights
};

inline std::vector<RatingRecord> synthetic_log(const SyntheticLogSpec& spec, std::uint64_t seed) {
    if (spec.participants < 2) throw ConfigError("synthetic log needs at least two participants");
    if (spec.t_end <= spec.t_begin) throw ConfigError("synthetic log needs a non-empty time range");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> who(0, spec.participants - 1);
    std::uniform_int_distribution<Epoch> when(spec.t_begin, spec.t_end - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::lognormal_distribution<double> amount(0.0, spec.weight_sigma);
    auto name = [](std::size_t i) { return ParticipantId("p" + std::to_string(i)); };

    std::vector<RatingRecord> out;
    out.reserve(spec.ratings);
    while (out.size() < spec.ratings) {
        const std::size_t rater = who(rng);
        const std::size_t ratee = who(rng);
        if (rater == ratee) continue;
        RatingRecord r;
        r.rater = name(rater);
        r.ratee = name(ratee);
        const bool stake = unit(rng) < spec.stake_fraction;
        r.kind = stake ? RatingKind::Stake : RatingKind::Transaction;
        r.value = stake ? 1.0 : (unit(rng) < 0.8 ? 1.0 : -1.0);
        r.weight = stake ? 1.0 : amount(rng);
        r.timestamp = when(rng);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace liquidrank
