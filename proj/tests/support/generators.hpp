// Seeded random instances and synthetic communities for tests.

#pragma once

#include <random>
#include <string>
#include <vector>

#include <liquidrank/engine.hpp>
#include <liquidrank/eval.hpp>

namespace gen {

using namespace liquidrank;

inline ParticipantId pid(std::size_t i) { return ParticipantId("p" + std::to_string(i)); }

struct Instance {
    std::vector<RatingRecord> records;
    ReputationState prev;
    EngineConfig cfg;
};

struct InstanceShape {
    std::size_t max_participants = 10;
    std::size_t max_ratings = 50;
    bool aspects = true;
    bool categories = true;
    bool zero_reputations = true;
};

/// Small random window: mixed kinds, optional aspects and categories, random
/// prior reputations (some participants unknown) and random engine weights.
inline Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape = {}) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> np(2, shape.max_participants);
    const std::size_t n = np(rng);
    std::uniform_int_distribution<std::size_t> who(0, n - 1);
    std::uniform_int_distribution<std::size_t> nr(0, shape.max_ratings);
    std::uniform_int_distribution<int> pick3(0, 2);
    std::lognormal_distribution<double> amount(0.0, 1.5);

    Instance inst;
    inst.prev.at = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double roll = unit(rng);
        if (roll < 0.2) continue;  // unknown: default reputation
        double r = unit(rng);
        if (shape.zero_reputations && roll < 0.3) r = 0.0;
        inst.prev.values.emplace(pid(i), r);
    }
    inst.cfg.default_reputation = unit(rng);
    inst.cfg.rater_weight_floor = unit(rng) < 0.5 ? 0.0 : 0.1 * unit(rng);
    inst.cfg.use_log_financial = unit(rng) < 0.5;
    inst.cfg.default_aspect_weight = 0.5 + unit(rng);
    for (const char* a : {"speed", "quality", "kindness"}) inst.cfg.aspect_weights[a] = 0.1 + 2.0 * unit(rng);

    const std::size_t count = nr(rng);
    const char* aspects[] = {"speed", "quality", "kindness"};
    const char* cats[] = {"art", "finance", "pizza"};
    while (inst.records.size() < count) {
        const std::size_t a = who(rng), b = who(rng);
        if (a == b) continue;
        RatingRecord r;
        r.rater = pid(a);
        r.ratee = pid(b);
        r.kind = unit(rng) < 0.4 ? RatingKind::Stake : RatingKind::Transaction;
        r.value = 2.0 * unit(rng) - 1.0;
        if (unit(rng) < 0.1) r.value = unit(rng) < 0.5 ? 1.0 : -1.0;
        r.weight = r.kind == RatingKind::Stake ? 0.1 + 5.0 * unit(rng) : amount(rng);
        if (shape.aspects && unit(rng) < 0.7) r.aspect = aspects[pick3(rng)];
        if (shape.categories && unit(rng) < 0.7) r.category = cats[pick3(rng)];
        inst.records.push_back(std::move(r));
    }
    return inst;
}

/// Community with heavy-tailed transaction values: `participants` members,
/// `ratings` transactions with log-normal(0, sigma) financial value and graded
/// feedback uniform in [0, 1].
inline std::vector<RatingRecord> lognormal_community(std::uint64_t seed, std::size_t participants = 200,
                                                     std::size_t ratings = 5000, double sigma = 2.0) {
    std::mt19937_64 rng(seed);
    std::lognormal_distribution<double> amount(0.0, sigma);
    std::uniform_int_distribution<std::size_t> who(0, participants - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<Epoch> when(0, 999);
    std::vector<RatingRecord> out;
    while (out.size() < ratings) {
        const std::size_t a = who(rng), b = who(rng);
        if (a == b) continue;
        RatingRecord r;
        r.rater = pid(a);
        r.ratee = pid(b);
        r.kind = RatingKind::Transaction;
        r.value = unit(rng);
        r.weight = amount(rng);
        r.timestamp = when(rng);
        out.push_back(std::move(r));
    }
    return out;
}

struct PlantedCommunity {
    std::vector<RatingRecord> records;
    ReferenceList reference;
};

/// Reputable members rate each other +1 and rate scam members -1; scam members
/// only rate each other +1.
inline PlantedCommunity planted_community(std::uint64_t seed, std::size_t participants = 100,
                                          std::size_t reputable = 70) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> good(0, reputable - 1), scam(reputable, participants - 1);
    std::uniform_int_distribution<Epoch> when(0, 999);
    PlantedCommunity c;
    for (std::size_t i = 0; i < participants; ++i) c.reference.labels.emplace(pid(i), i < reputable ? 1.0 : 0.0);
    auto add = [&](std::size_t a, std::size_t b, double v) {
        if (a == b) return;
        RatingRecord r;
        r.rater = pid(a);
        r.ratee = pid(b);
        r.kind = RatingKind::Transaction;
        r.value = v;
        r.weight = 1.0;
        r.timestamp = when(rng);
        c.records.push_back(std::move(r));
    };
    for (int k = 0; k < 1500; ++k) add(good(rng), good(rng), 1.0);
    for (int k = 0; k < 300; ++k) add(good(rng), scam(rng), -1.0);
    for (int k = 0; k < 600; ++k) add(scam(rng), scam(rng), 1.0);
    return c;
}

}  // namespace gen
