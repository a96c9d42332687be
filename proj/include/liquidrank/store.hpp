// Reputation snapshot persistence.
//
// Canonical snapshot bytes:
//
//     # at=<timestamp>
//     participant,reputation
//     <id>,<value>            one row per participant, sorted by id
//
// Values use the shortest decimal that round-trips the double. Consensus
// digests are computed over exactly these bytes.

#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "ingest.hpp"
#include "types.hpp"

namespace liquidrank {

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string serialize_snapshot(const ReputationState& state) {
    std::string out = "# at=" + std::to_string(state.at) + "\nparticipant,reputation\n";
    for (const auto& [id, v] : state.values) {
        out += detail::csv_field(id.str());
        out += ',';
        out += format_double(v);
        out += '\n';
    }
    return out;
}

inline ReputationState deserialize_snapshot(std::string_view bytes) {
    std::istringstream in{std::string(bytes)};
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line.rfind("# at=", 0) != 0) throw InputError("missing snapshot header", line_no);
    ReputationState state;
    state.at = detail::parse_epoch(std::string_view(line).substr(5), "snapshot timestamp", line_no);
    ++line_no;
    if (!std::getline(in, line) || line != "participant,reputation") throw InputError("missing column header", line_no);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = detail::split_csv_line(line, line_no);
        if (fields.size() != 2) throw InputError("expected participant,reputation", line_no);
        double v = detail::parse_double(fields[1], "reputation", line_no);
        if (!(v >= 0.0 && v <= 1.0)) throw InputError("reputation outside [0, 1]", line_no);
        ParticipantId id(std::move(fields[0]));
        if (!state.values.empty() && !(state.values.rbegin()->first < id))
            throw InputError("snapshot rows must be sorted and unique", line_no);
        state.values.emplace_hint(state.values.end(), std::move(id), v);
    }
    return state;
}

inline ReputationState read_snapshot_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot open snapshot " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_snapshot(ss.str());
}

/// Snapshot file name: the timestamp zero-padded to 20 digits.
inline std::string snapshot_file_name(Epoch at) {
    if (at < 0) throw InputError("snapshot timestamps must be non-negative");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%020lld.csv", static_cast<long long>(at));
    return buf;
}

enum class StoreBackend { Transient, LocalFile };

/// Ordered history of reputation snapshots.
///
/// Transient keeps everything in memory. LocalFile writes one file per
/// snapshot into a directory and reloads what is already there on open.
/// One writer, any number of readers.
class StateStore {
public:
    static StateStore transient() { return StateStore(StoreBackend::Transient, {}); }

    static StateStore local_file(std::filesystem::path dir) {
        std::filesystem::create_directories(dir);
        StateStore store(StoreBackend::LocalFile, dir);
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            auto state = read_snapshot_file(f);
            if (f.filename() != snapshot_file_name(state.at))
                throw InputError("snapshot file " + f.string() + " does not match its header timestamp");
            store.index_.emplace(state.at, std::move(state));
        }
        return store;
    }

    StateStore(StateStore&& other) noexcept
        : backend_(other.backend_), dir_(std::move(other.dir_)), index_(std::move(other.index_)) {}

    StoreBackend backend() const noexcept { return backend_; }

    /// Appends a snapshot. Re-putting an identical snapshot is a no-op.
    void put(const ReputationState& state) {
        std::unique_lock lock(mutex_);
        if (auto it = index_.find(state.at); it != index_.end()) {
            if (serialize_snapshot(it->second) == serialize_snapshot(state)) return;
            throw ConflictError("conflicting snapshot for t=" + std::to_string(state.at));
        }
        if (!index_.empty() && state.at < index_.rbegin()->first)
            throw OrderingError("snapshot t=" + std::to_string(state.at) + " precedes latest t=" +
                                std::to_string(index_.rbegin()->first));
        if (backend_ == StoreBackend::LocalFile) write_file(state);
        index_.emplace(state.at, state);
    }

    ReputationState get(Epoch at) const {
        std::shared_lock lock(mutex_);
        auto it = index_.find(at);
        if (it == index_.end()) throw NotFoundError("no snapshot at t=" + std::to_string(at));
        if (backend_ == StoreBackend::LocalFile) return read_snapshot_file(dir_ / snapshot_file_name(at));
        return it->second;
    }

    ReputationState latest() const {
        std::shared_lock lock(mutex_);
        if (index_.empty()) throw NotFoundError("store is empty");
        return it_state(std::prev(index_.end()));
    }

    /// Snapshots with from <= at <= to, ascending.
    std::vector<ReputationState> history(Epoch from, Epoch to) const {
        std::shared_lock lock(mutex_);
        std::vector<ReputationState> out;
        for (auto it = index_.lower_bound(from); it != index_.end() && it->first <= to; ++it) out.push_back(it_state(it));
        return out;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return index_.size();
    }

    std::filesystem::path path_of(Epoch at) const { return dir_ / snapshot_file_name(at); }

private:
    using Index = std::map<Epoch, ReputationState>;

    StateStore(StoreBackend backend, std::filesystem::path dir) : backend_(backend), dir_(std::move(dir)) {}

    ReputationState it_state(Index::const_iterator it) const {
        if (backend_ == StoreBackend::LocalFile) return read_snapshot_file(dir_ / snapshot_file_name(it->first));
        return it->second;
    }

    void write_file(const ReputationState& state) const {
        const auto target = dir_ / snapshot_file_name(state.at);
        const auto tmp = target.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error("cannot write snapshot " + tmp);
            out << serialize_snapshot(state);
            out.flush();
            if (!out) throw Error("failed writing snapshot " + tmp);
        }
        std::filesystem::rename(tmp, target);
    }

    StoreBackend backend_;
    std::filesystem::path dir_;
    Index index_;
    mutable std::shared_mutex mutex_;
};

}  // namespace liquidrank
