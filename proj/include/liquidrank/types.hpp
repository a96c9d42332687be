// Core value types shared by every liquidrank module.

#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace liquidrank {

using Epoch = std::int64_t;

// Error taxonomy. The CLI maps these onto exit codes.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invariant-violating input. `line` is 1-based, 0 when unknown.
class InputError : public Error {
public:
    explicit InputError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class OrderingError : public Error {
public:
    using Error::Error;
};

class ConflictError : public Error {
public:
    using Error::Error;
};

class UndefinedCorrelation : public Error {
public:
    using Error::Error;
};

/// Opaque participant token. Equality and ordering are byte-wise.
class ParticipantId {
public:
    ParticipantId() = default;
    explicit ParticipantId(std::string token) : token_(std::move(token)) {
        if (token_.empty()) throw InputError("participant id must be non-empty");
    }

    const std::string& str() const noexcept { return token_; }

    friend bool operator==(const ParticipantId&, const ParticipantId&) = default;
    friend std::strong_ordering operator<=>(const ParticipantId& a, const ParticipantId& b) {
        return a.token_.compare(b.token_) <=> 0;
    }

private:
    std::string token_;
};

enum class RatingKind { Stake, Transaction };

inline const char* to_string(RatingKind kind) {
    return kind == RatingKind::Stake ? "stake" : "transaction";
}

/// One rating event from `rater` about `ratee`.
///
/// `weight` is the stake value for Stake records and the financial value for
/// Transaction records. A Stake with value 0 is a revoked endorsement.
struct RatingRecord {
    ParticipantId rater;
    ParticipantId ratee;
    RatingKind kind = RatingKind::Transaction;
    std::optional<std::string> aspect;
    std::optional<std::string> category;
    double value = 0.0;
    double weight = 1.0;
    std::optional<std::string> event;
    Epoch timestamp = 0;

    friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

/// Throws InputError if the record breaks a RatingRecord invariant.
inline void validate(const RatingRecord& r, std::size_t line = 0) {
    if (r.rater == r.ratee) throw InputError("self-rating rejected for participant '" + r.rater.str() + "'", line);
    if (!(r.value >= -1.0 && r.value <= 1.0))
        throw InputError("rating value " + std::to_string(r.value) + " outside [-1, 1]", line);
    if (!(r.weight >= 0.0) || r.weight == std::numeric_limits<double>::infinity())
        throw InputError("rating weight must be finite and non-negative", line);
}

/// Interval between two consecutive reputation evaluations.
struct TimeWindow {
    Epoch t_origin = 0;
    Epoch t_prev = 0;
    Epoch t_now = 1;

    void validate() const {
        if (!(t_origin <= t_prev && t_prev < t_now))
            throw InputError("time window requires t_origin <= t_prev < t_now");
    }

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

using ReputationMap = std::map<ParticipantId, double>;

/// Reputations valid at `at`; absent participants hold the default reputation.
struct ReputationState {
    Epoch at = 0;
    ReputationMap values;

    double get(const ParticipantId& id, double fallback) const {
        auto it = values.find(id);
        return it == values.end() ? fallback : it->second;
    }

    friend bool operator==(const ReputationState&, const ReputationState&) = default;
};

struct DifferentialReputation {
    TimeWindow window;
    std::optional<ReputationMap> dS;
    std::optional<ReputationMap> dF;
    std::optional<ReputationMap> dP;
    std::optional<ReputationMap> lP;
    std::optional<ReputationMap> P;
};

/// Facet keys use the empty string for a record without aspect or category.
struct FacetedDifferential {
    TimeWindow window;
    std::map<std::pair<ParticipantId, std::string>, double> by_category;
    std::map<std::pair<ParticipantId, std::string>, double> by_aspect;
    std::map<std::tuple<ParticipantId, std::string, std::string>, double> by_aspect_category;
};

}  // namespace liquidrank
