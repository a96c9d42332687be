// Reputation consensus among agencies: the per-node decision ladder, reward
// attribution, and a deterministic discrete-event simulator.
//
// Each cycle every agency publishes the digest of its canonical snapshot. A
// node tallies receipts (its own digest counts once, at send time):
//
//   - a receipt whose digest differs from an earlier one marks the cycle
//     disputed and raises a DisputedSet alert;
//   - an undisputed cycle is accepted once one digest has min_identical
//     receipts;
//   - a disputed cycle is resolved once total receipts reach max_nonidentical
//     and the leading digest has min_identical receipts. The leader wins, ties
//     go to the lexicographically smallest digest, and a DivergentSenders alert
//     names everyone who sent something else;
//   - if neither happens within `timeout` ticks of the first receipt the cycle
//     is Broken and a SystemCheck alert is raised.
//
// With por_weighted every count is replaced by the sum of the senders'
// agency reputations. Messages that arrive at the same tick are tallied as one
// batch before the ladder is evaluated.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "engine.hpp"
#include "store.hpp"
#include "types.hpp"

namespace liquidrank {

using Tick = std::int64_t;

class AgencyId {
public:
    AgencyId() = default;
    explicit AgencyId(std::string token) : token_(std::move(token)) {
        if (token_.empty()) throw ConfigError("agency id must be non-empty");
    }

    const std::string& str() const noexcept { return token_; }

    friend bool operator==(const AgencyId&, const AgencyId&) = default;
    friend std::strong_ordering operator<=>(const AgencyId& a, const AgencyId& b) {
        return a.token_.compare(b.token_) <=> 0;
    }

private:
    std::string token_;
};

/// Lowercase hex SHA-256 of arbitrary bytes.
inline std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

/// Digest of a state's canonical snapshot bytes.
inline std::string state_digest(const ReputationState& state) { return sha256_hex(serialize_snapshot(state)); }

struct StateDigest {
    std::uint64_t cycle = 0;
    std::string digest;
    AgencyId sender;
};

struct ConsensusConfig {
    std::uint32_t min_identical = 2;
    std::uint32_t max_nonidentical = 3;
    Tick timeout = 10;
    bool por_weighted = false;
    std::map<AgencyId, double> agency_reputations;

    void validate() const {
        if (min_identical < 2) throw ConfigError("min_identical must be at least 2");
        if (max_nonidentical < 1) throw ConfigError("max_nonidentical must be positive");
        if (timeout <= 0) throw ConfigError("timeout must be positive");
        for (const auto& [id, r] : agency_reputations)
            if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("agency reputation for '" + id.str() + "' outside [0, 1]");
    }

    /// Voting weight of one receipt: 1, or the sender's reputation under POR.
    double weight_of(const AgencyId& sender) const {
        if (!por_weighted) return 1.0;
        auto it = agency_reputations.find(sender);
        return it == agency_reputations.end() ? 0.0 : it->second;
    }
};

enum class AlertKind { DisputedSet, DivergentSenders, SystemCheck };

inline const char* to_string(AlertKind k) {
    switch (k) {
        case AlertKind::DisputedSet: return "DisputedSet";
        case AlertKind::DivergentSenders: return "DivergentSenders";
        case AlertKind::SystemCheck: return "SystemCheck";
    }
    return "?";
}

struct Alert {
    AlertKind kind = AlertKind::DisputedSet;
    std::uint64_t cycle = 0;
    std::vector<AgencyId> senders;
    std::string details;

    friend bool operator==(const Alert&, const Alert&) = default;
};

enum class Outcome { Accepted, AcceptedWithDispute, Broken };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Accepted: return "Accepted";
        case Outcome::AcceptedWithDispute: return "AcceptedWithDispute";
        case Outcome::Broken: return "Broken";
    }
    return "?";
}

struct AgencyDecision {
    Outcome outcome = Outcome::Broken;
    std::optional<std::string> digest;  // empty for Broken
    std::vector<AgencyId> divergent;    // AcceptedWithDispute only
    std::vector<Alert> alerts;
    Tick at = 0;

    friend bool operator==(const AgencyDecision&, const AgencyDecision&) = default;
};

struct StepResult {
    std::optional<AgencyDecision> decision;
    std::vector<Alert> alerts;  // every alert raised by this step, decision alerts included
};

/// Consensus state machine of one agency.
class AgencyNode {
public:
    struct Receipt {
        AgencyId sender;
        std::string digest;
        Tick at = 0;
    };

    AgencyNode(AgencyId self, ConsensusConfig cfg) : self_(std::move(self)), cfg_(std::move(cfg)) { cfg_.validate(); }

    const AgencyId& id() const noexcept { return self_; }
    std::uint64_t cycle() const noexcept { return cycle_; }
    bool disputed() const noexcept { return disputed_; }
    const std::optional<AgencyDecision>& decision() const noexcept { return decision_; }
    const std::vector<Receipt>& receipts() const noexcept { return receipts_; }
    std::optional<Tick> first_receipt() const noexcept { return first_receipt_; }

    /// Starts `cycle`, counting the node's own digest (if it publishes one) as
    /// the first receipt, then replays anything buffered for this cycle.
    StepResult begin_cycle(std::uint64_t cycle, Tick now, std::optional<std::string> own_digest) {
        cycle_ = cycle;
        receipts_.clear();
        tallies_.clear();
        disputed_ = false;
        decision_.reset();
        first_receipt_.reset();

        std::vector<StateDigest> batch;
        if (own_digest) batch.push_back({cycle, std::move(*own_digest), self_});
        if (auto it = buffered_.find(cycle); it != buffered_.end()) {
            batch.insert(batch.end(), it->second.begin(), it->second.end());
            buffered_.erase(it);
        }
        std::erase_if(buffered_, [&](const auto& kv) { return kv.first < cycle; });
        if (batch.empty()) return {};
        return receive_batch(batch, now);
    }

    StepResult receive(const StateDigest& msg, Tick now) { return receive_batch(std::span(&msg, 1), now); }

    /// Tallies a set of simultaneous receipts, then evaluates the ladder once.
    StepResult receive_batch(std::span<const StateDigest> msgs, Tick now) {
        StepResult out;
        bool recorded = false;
        for (const auto& msg : msgs) {
            if (msg.cycle < cycle_) continue;
            if (msg.cycle > cycle_) {
                buffered_[msg.cycle].push_back(msg);
                continue;
            }
            if (decision_) continue;
            const bool duplicate = std::any_of(receipts_.begin(), receipts_.end(),
                                               [&](const Receipt& r) { return r.sender == msg.sender; });
            if (duplicate) continue;
            const bool differs = std::any_of(tallies_.begin(), tallies_.end(),
                                             [&](const auto& kv) { return kv.first != msg.digest; });
            receipts_.push_back({msg.sender, msg.digest, now});
            tallies_[msg.digest] += cfg_.weight_of(msg.sender);
            if (!first_receipt_) first_receipt_ = now;
            recorded = true;
            if (differs) {
                disputed_ = true;
                out.alerts.push_back({AlertKind::DisputedSet, cycle_, {msg.sender},
                                      "state " + msg.digest.substr(0, 12) + " differs from earlier receipts"});
            }
        }
        if (recorded && !decision_) {
            if (auto d = evaluate(now)) {
                out.alerts.insert(out.alerts.end(), d->alerts.begin(), d->alerts.end());
                decision_ = *d;
                out.decision = std::move(d);
            }
        }
        return out;
    }

    /// Declares the cycle Broken once the timeout has elapsed since the first receipt.
    std::optional<AgencyDecision> tick(Tick now) {
        if (decision_ || !first_receipt_ || now - *first_receipt_ < cfg_.timeout) return std::nullopt;
        AgencyDecision d;
        d.outcome = Outcome::Broken;
        d.at = now;
        d.alerts.push_back({AlertKind::SystemCheck, cycle_, {},
                            "no consensus within " + std::to_string(cfg_.timeout) + " ticks of first receipt; " +
                                std::to_string(receipts_.size()) + " receipt(s), " + std::to_string(tallies_.size()) +
                                " distinct state(s)"});
        decision_ = d;
        return d;
    }

private:
    std::optional<AgencyDecision> evaluate(Tick now) const {
        double total = 0.0;
        const std::string* leader = nullptr;
        double leader_weight = -1.0;
        bool tie = false;
        for (const auto& [digest, w] : tallies_) {  // ascending digest order
            total += w;
            if (w > leader_weight) {
                leader = &digest;
                leader_weight = w;
                tie = false;
            } else if (w == leader_weight) {
                tie = true;
            }
        }
        const double min_identical = cfg_.min_identical;
        const double max_nonidentical = cfg_.max_nonidentical;
        if (leader == nullptr || leader_weight < min_identical) return std::nullopt;

        AgencyDecision d;
        d.digest = *leader;
        d.at = now;
        if (!disputed_) {
            d.outcome = Outcome::Accepted;
            return d;
        }
        if (total < max_nonidentical) return std::nullopt;
        d.outcome = Outcome::AcceptedWithDispute;
        for (const auto& r : receipts_)
            if (r.digest != *leader) d.divergent.push_back(r.sender);
        std::sort(d.divergent.begin(), d.divergent.end());
        std::string details = "accepted " + leader->substr(0, 12) + " by majority";
        if (tie) details += "; tie between equally supported states broken by smallest digest";
        d.alerts.push_back({AlertKind::DivergentSenders, cycle_, d.divergent, std::move(details)});
        return d;
    }

    AgencyId self_;
    ConsensusConfig cfg_;
    std::uint64_t cycle_ = 0;
    std::vector<Receipt> receipts_;
    std::map<std::string, double> tallies_;
    bool disputed_ = false;
    std::optional<Tick> first_receipt_;
    std::optional<AgencyDecision> decision_;
    std::map<std::uint64_t, std::vector<StateDigest>> buffered_;
};

// ---------------------------------------------------------------------------
// Simulator

enum class FaultModel {
    Honest,
    Silent,        // publishes nothing and takes no part
    Divergent,     // publishes one state that differs from the honest one
    Equivocating,  // publishes a different state to every peer
};

inline const char* to_string(FaultModel f) {
    switch (f) {
        case FaultModel::Honest: return "honest";
        case FaultModel::Silent: return "silent";
        case FaultModel::Divergent: return "divergent";
        case FaultModel::Equivocating: return "equivocating";
    }
    return "?";
}

inline FaultModel parse_fault_model(std::string_view s) {
    if (s == "honest") return FaultModel::Honest;
    if (s == "silent") return FaultModel::Silent;
    if (s == "divergent") return FaultModel::Divergent;
    if (s == "equivocating") return FaultModel::Equivocating;
    throw ConfigError("unknown fault model '" + std::string(s) + "'");
}

/// Parses `<agency>=<model>[,<agency>=<model>...]`; `none` or empty means no faults.
inline std::map<AgencyId, FaultModel> parse_fault_spec(std::string_view spec) {
    std::map<AgencyId, FaultModel> out;
    if (spec.empty() || spec == "none") return out;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const auto comma = std::min(spec.find(',', pos), spec.size());
        const auto item = spec.substr(pos, comma - pos);
        const auto eq = item.find_first_of("=:");
        if (eq == std::string_view::npos || eq == 0)
            throw ConfigError("fault spec entries look like a3=divergent, got '" + std::string(item) + "'");
        AgencyId id{std::string(item.substr(0, eq))};
        if (!out.emplace(id, parse_fault_model(item.substr(eq + 1))).second)
            throw ConfigError("agency '" + id.str() + "' listed twice in fault spec");
        pos = comma + 1;
    }
    return out;
}

/// Per-link delay drawn uniformly from [delay_min, delay_max]; each message is
/// independently dropped with drop_probability.
struct NetworkModel {
    Tick delay_min = 1;
    Tick delay_max = 1;
    double drop_probability = 0.0;
};

struct SimulationConfig {
    std::size_t agencies = 5;
    std::map<AgencyId, FaultModel> faulty;
    NetworkModel network;
    std::size_t cycles = 20;
    Tick cycle_length = 0;  // 0 selects timeout + delay_max + 1
    ConsensusConfig consensus;
    std::size_t reward_slots = 1;
    std::uint64_t seed = 0;
    EngineConfig engine;
    // Ratings every agency reads in cycle k: cycle_ratings[k % size]; empty means no ratings.
    std::vector<std::vector<RatingRecord>> cycle_ratings;

    Tick effective_cycle_length() const {
        return cycle_length > 0 ? cycle_length : consensus.timeout + network.delay_max + 1;
    }
};

/// Agency ids a0..a{n-1}, zero-padded so lexicographic order matches index order.
inline std::vector<AgencyId> agency_ids(std::size_t n) {
    const std::size_t width = std::to_string(n == 0 ? 0 : n - 1).size();
    std::vector<AgencyId> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::string num = std::to_string(i);
        out.emplace_back("a" + std::string(width - num.size(), '0') + num);
    }
    return out;
}

enum class EventType { Send, Drop, Receive, Decision, Alert };

inline const char* to_string(EventType t) {
    switch (t) {
        case EventType::Send: return "send";
        case EventType::Drop: return "drop";
        case EventType::Receive: return "receive";
        case EventType::Decision: return "decision";
        case EventType::Alert: return "alert";
    }
    return "?";
}

struct TranscriptEvent {
    Tick tick = 0;
    EventType type = EventType::Send;
    std::uint64_t cycle = 0;
    std::optional<AgencyId> sender;
    std::optional<AgencyId> receiver;
    std::optional<std::string> digest;
    std::optional<AgencyDecision> decision;
    std::optional<Alert> alert;
};

struct SimulationResult {
    std::vector<AgencyId> agencies;
    std::map<AgencyId, FaultModel> faults;
    std::vector<TranscriptEvent> transcript;
    // Per cycle, per participating (non-silent) agency.
    std::vector<std::map<AgencyId, std::optional<AgencyDecision>>> decisions;
    // Per cycle, the digest accepted by the most nodes (ties: smallest digest).
    std::vector<std::optional<std::string>> accepted;
    std::vector<std::vector<AgencyId>> rewards;
};

/// First `slots` distinct senders of `accepted` in `cycle`, by send tick then id.
inline std::vector<AgencyId> mining_reward(std::span<const TranscriptEvent> transcript, std::uint64_t cycle,
                                           const std::optional<std::string>& accepted, std::size_t slots) {
    if (!accepted || slots == 0) return {};
    std::vector<std::pair<Tick, AgencyId>> sends;
    for (const auto& e : transcript)
        if (e.type == EventType::Send && e.cycle == cycle && e.digest == accepted && e.sender)
            sends.emplace_back(e.tick, *e.sender);
    std::sort(sends.begin(), sends.end());
    std::vector<AgencyId> out;
    for (const auto& [_, sender] : sends) {
        if (out.size() == slots) break;
        if (std::find(out.begin(), out.end(), sender) == out.end()) out.push_back(sender);
    }
    return out;
}

namespace detail {

inline ReputationState forged(ReputationState s, const std::string& tag) {
    s.values.insert_or_assign(ParticipantId("~forged-" + tag), 1.0);
    return s;
}

}  // namespace detail

inline void validate(const SimulationConfig& cfg) {
    cfg.consensus.validate();
    cfg.engine.validate();
    if (cfg.agencies == 0) throw ConfigError("at least one agency is required");
    const auto ids = agency_ids(cfg.agencies);
    for (const auto& [id, _] : cfg.faulty)
        if (std::find(ids.begin(), ids.end(), id) == ids.end())
            throw ConfigError("fault spec names unknown agency '" + id.str() + "'");
    if (cfg.network.delay_min < 0 || cfg.network.delay_max < cfg.network.delay_min)
        throw ConfigError("network delays must satisfy 0 <= delay_min <= delay_max");
    if (!(cfg.network.drop_probability >= 0.0 && cfg.network.drop_probability <= 1.0))
        throw ConfigError("drop_probability must lie in [0, 1]");
    if (cfg.effective_cycle_length() <= cfg.consensus.timeout)
        throw ConfigError("cycle_length must exceed the consensus timeout");
    if (cfg.reward_slots == 0) throw ConfigError("reward_slots must be positive");
    if (cfg.consensus.por_weighted)
        for (const auto& id : ids)
            if (!cfg.consensus.agency_reputations.contains(id))
                throw ConfigError("por_weighted requires a reputation for agency '" + id.str() + "'");
}

/// Runs the protocol for `cfg.cycles` cycles. Fully determined by `cfg`.
///
/// Honest agencies compute the next state from the state they accepted last
/// (a Broken cycle leaves it unchanged) and the cycle's ratings. All agencies
/// publish at the first tick of the cycle.
inline SimulationResult run_simulation(const SimulationConfig& cfg) {
    validate(cfg);
    SimulationResult result;
    result.agencies = agency_ids(cfg.agencies);
    const auto& ids = result.agencies;
    auto fault_of = [&](const AgencyId& id) {
        auto it = cfg.faulty.find(id);
        return it == cfg.faulty.end() ? FaultModel::Honest : it->second;
    };
    for (const auto& id : ids) result.faults.emplace(id, fault_of(id));

    std::map<AgencyId, AgencyNode> nodes;
    std::map<AgencyId, ReputationState> accepted_state;
    for (const auto& id : ids) {
        if (fault_of(id) == FaultModel::Silent) continue;
        nodes.emplace(id, AgencyNode(id, cfg.consensus));
        accepted_state.emplace(id, ReputationState{});
    }

    struct Delivery {
        AgencyId receiver;
        AgencyId sender;
        std::uint64_t msg_id;
        StateDigest msg;
    };
    std::map<Tick, std::vector<Delivery>> queue;
    std::map<std::string, ReputationState> published;  // digest -> state content
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<Tick> delay(cfg.network.delay_min, cfg.network.delay_max);
    std::uint64_t next_msg_id = 0;
    auto& log = result.transcript;
    const Tick length = cfg.effective_cycle_length();

    auto record_step = [&](const AgencyId& node, std::uint64_t cycle, Tick now, StepResult&& step) {
        for (auto& a : step.alerts) log.push_back({now, EventType::Alert, cycle, std::nullopt, node, std::nullopt, std::nullopt, a});
        if (step.decision)
            log.push_back({now, EventType::Decision, cycle, std::nullopt, node, step.decision->digest, step.decision, std::nullopt});
    };

    for (std::uint64_t cycle = 0; cycle < cfg.cycles; ++cycle) {
        const Tick start = static_cast<Tick>(cycle) * length;
        const TimeWindow window{0, 0, start + length};
        std::span<const RatingRecord> ratings;
        if (!cfg.cycle_ratings.empty()) ratings = cfg.cycle_ratings[cycle % cfg.cycle_ratings.size()];

        // Publish.
        for (const auto& id : ids) {
            const FaultModel fault = fault_of(id);
            if (fault == FaultModel::Silent) continue;
            const auto& prior = accepted_state.at(id);
            TimeWindow w = window;
            w.t_prev = prior.at;
            ReputationState honest = run_pipeline(ratings, prior, w, cfg.engine).state;
            ReputationState own = fault == FaultModel::Divergent ? detail::forged(honest, id.str()) : honest;
            std::string own_digest = state_digest(own);
            published.emplace(own_digest, own);

            for (const auto& peer : ids) {
                if (peer == id) continue;
                std::string digest = own_digest;
                if (fault == FaultModel::Equivocating) {
                    auto variant = detail::forged(honest, id.str() + "-to-" + peer.str());
                    digest = state_digest(variant);
                    published.emplace(digest, std::move(variant));
                }
                const bool dropped = unit(rng) < cfg.network.drop_probability;
                const Tick d = delay(rng);
                log.push_back({start, EventType::Send, cycle, id, peer, digest, std::nullopt, std::nullopt});
                const std::uint64_t msg_id = next_msg_id++;
                if (dropped) {
                    log.push_back({start, EventType::Drop, cycle, id, peer, digest, std::nullopt, std::nullopt});
                } else {
                    queue[start + d].push_back({peer, id, msg_id, StateDigest{cycle, digest, id}});
                }
            }
            log.push_back({start, EventType::Receive, cycle, id, id, own_digest, std::nullopt, std::nullopt});
            record_step(id, cycle, start, nodes.at(id).begin_cycle(cycle, start, own_digest));
        }

        // Deliver and time out, tick by tick.
        for (Tick now = start; now < start + length; ++now) {
            if (auto it = queue.find(now); it != queue.end()) {
                auto batch = std::move(it->second);
                queue.erase(it);
                std::sort(batch.begin(), batch.end(), [](const Delivery& a, const Delivery& b) {
                    return std::tie(a.receiver, a.sender, a.msg_id) < std::tie(b.receiver, b.sender, b.msg_id);
                });
                for (std::size_t i = 0; i < batch.size();) {
                    std::size_t j = i;
                    std::vector<StateDigest> msgs;
                    for (; j < batch.size() && batch[j].receiver == batch[i].receiver; ++j) {
                        log.push_back({now, EventType::Receive, batch[j].msg.cycle, batch[j].sender, batch[j].receiver,
                                       batch[j].msg.digest, std::nullopt, std::nullopt});
                        msgs.push_back(batch[j].msg);
                    }
                    if (auto node = nodes.find(batch[i].receiver); node != nodes.end())
                        record_step(node->first, cycle, now, node->second.receive_batch(msgs, now));
                    i = j;
                }
            }
            for (auto& [id, node] : nodes)
                if (auto d = node.tick(now)) record_step(id, cycle, now, StepResult{d, d->alerts});
        }

        // Close the cycle.
        auto& decided = result.decisions.emplace_back();
        std::map<std::string, std::size_t> support;
        for (auto& [id, node] : nodes) {
            decided.emplace(id, node.decision());
            const auto& d = node.decision();
            if (d && d->digest) {
                ++support[*d->digest];
                accepted_state.at(id) = published.at(*d->digest);
            }
        }
        std::optional<std::string> winner;
        std::size_t best = 0;
        for (const auto& [digest, n] : support)
            if (n > best) {
                best = n;
                winner = digest;
            }
        result.accepted.push_back(winner);
        result.rewards.push_back(mining_reward(log, cycle, winner, cfg.reward_slots));
    }
    return result;
}

inline nlohmann::json to_json(const Alert& a) {
    nlohmann::json senders = nlohmann::json::array();
    for (const auto& s : a.senders) senders.push_back(s.str());
    return {{"kind", to_string(a.kind)}, {"cycle", a.cycle}, {"senders", senders}, {"details", a.details}};
}

inline nlohmann::json to_json(const AgencyDecision& d) {
    nlohmann::json divergent = nlohmann::json::array();
    for (const auto& s : d.divergent) divergent.push_back(s.str());
    nlohmann::json j = {{"outcome", to_string(d.outcome)}, {"divergent", divergent}, {"at", d.at}};
    j["digest"] = d.digest ? nlohmann::json(*d.digest) : nlohmann::json(nullptr);
    return j;
}

/// One JSON object per event: tick, type, cycle, sender, receiver, digest, decision, alert.
inline std::string transcript_jsonl(std::span<const TranscriptEvent> events) {
    std::string out;
    for (const auto& e : events) {
        nlohmann::json j;
        j["tick"] = e.tick;
        j["type"] = to_string(e.type);
        j["cycle"] = e.cycle;
        j["sender"] = e.sender ? nlohmann::json(e.sender->str()) : nlohmann::json(nullptr);
        j["receiver"] = e.receiver ? nlohmann::json(e.receiver->str()) : nlohmann::json(nullptr);
        j["digest"] = e.digest ? nlohmann::json(*e.digest) : nlohmann::json(nullptr);
        j["decision"] = e.decision ? to_json(*e.decision) : nlohmann::json(nullptr);
        j["alert"] = e.alert ? to_json(*e.alert) : nlohmann::json(nullptr);
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace liquidrank
