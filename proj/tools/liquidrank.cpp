// liquidrank command-line tool.
//
// Exit codes: 0 success, 1 input validation error, 2 configuration or usage
// error, 3 undefined correlation, 4 any other failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include <liquidrank/liquidrank.hpp>

namespace fs = std::filesystem;
using namespace liquidrank;

namespace {

std::vector<RatingRecord> read_log(const std::string& path, const std::string& format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open log " + path);
    LogFormat f = LogFormat::Csv;
    if (format == "jsonl" || (format == "auto" && fs::path(path).extension() == ".jsonl")) f = LogFormat::Jsonl;
    else if (format != "csv" && format != "auto") throw ConfigError("unknown log format '" + format + "'");
    try {
        return parse_log(in, f);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

RunConfig read_config(const std::string& path) { return path.empty() ? RunConfig{} : load_config(path); }

void write_file(const fs::path& path, const std::string& bytes) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << bytes;
}

std::string fixed6(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(6) << v;
    return ss.str();
}

std::string differential_audit(const DifferentialReputation& d) {
    std::set<ParticipantId> ids;
    const std::optional<ReputationMap>* columns[] = {&d.dS, &d.dF, &d.dP, &d.lP, &d.P};
    for (const auto* col : columns)
        if (col->has_value())
            for (const auto& [id, _] : **col) ids.insert(id);
    std::string out = "# window t_origin=" + std::to_string(d.window.t_origin) +
                      " t_prev=" + std::to_string(d.window.t_prev) + " t_now=" + std::to_string(d.window.t_now) +
                      "\nparticipant,dS,dF,dP,lP,P\n";
    for (const auto& id : ids) {
        out += detail::csv_field(id.str());
        for (const auto* col : columns) {
            out += ',';
            if (col->has_value())
                if (auto it = (*col)->find(id); it != (*col)->end()) out += format_double(it->second);
        }
        out += '\n';
    }
    return out;
}

std::string ranking_csv(const ReputationState& state) {
    std::vector<std::pair<ParticipantId, double>> rows(state.values.begin(), state.values.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::string out = "participant,reputation\n";
    for (const auto& [id, v] : rows) out += detail::csv_field(id.str()) + ',' + format_double(v) + '\n';
    return out;
}

int cmd_compute(const std::string& log_path, const std::string& config_path, const std::string& window,
                const std::string& out_dir, Epoch origin, const std::string& format) {
    const RunConfig rc = read_config(config_path);
    const WindowMode mode = parse_window_mode(window);
    auto records = read_log(log_path, format);
    const auto results = compute_log(std::move(records), mode, origin, rc.engine);

    const fs::path out(out_dir);
    auto store = StateStore::local_file(out / "snapshots");
    fs::create_directories(out / "differentials");
    for (const auto& r : results) {
        store.put(r.state);
        write_file(out / "differentials" / snapshot_file_name(r.state.at), differential_audit(r.differential));
    }
    std::cout << ranking_csv(results.empty() ? ReputationState{origin, {}} : results.back().state);
    return 0;
}

std::string join(const std::vector<AgencyId>& ids) {
    std::string out;
    for (const auto& id : ids) out += (out.empty() ? "" : ";") + id.str();
    return out;
}

std::string simulation_summary(const SimulationResult& r) {
    std::string out =
        "cycle,accepted,accepted_with_dispute,broken,undecided,disputed_alerts,divergent_alerts,system_alerts,"
        "divergent_senders,rewarded,digest\n";
    std::array<std::size_t, 7> totals{};
    for (std::size_t c = 0; c < r.decisions.size(); ++c) {
        std::array<std::size_t, 7> n{};
        for (const auto& [_, d] : r.decisions[c]) {
            if (!d) ++n[3];
            else ++n[static_cast<std::size_t>(d->outcome)];
        }
        std::set<AgencyId> named;
        for (const auto& e : r.transcript) {
            if (e.type != EventType::Alert || e.cycle != c || !e.alert) continue;
            ++n[4 + static_cast<std::size_t>(e.alert->kind)];
            if (e.alert->kind == AlertKind::DivergentSenders) named.insert(e.alert->senders.begin(), e.alert->senders.end());
        }
        for (std::size_t k = 0; k < n.size(); ++k) totals[k] += n[k];
        out += std::to_string(c);
        for (auto v : n) out += ',' + std::to_string(v);
        out += ',' + join({named.begin(), named.end()}) + ',' + join(r.rewards[c]) + ',';
        out += r.accepted[c] ? r.accepted[c]->substr(0, 16) : std::string{};
        out += '\n';
    }
    out += "total";
    for (auto v : totals) out += ',' + std::to_string(v);
    out += ",,,\n";
    return out;
}

int cmd_simulate(std::size_t agencies, const std::string& faulty, std::uint64_t seed, const std::string& out_dir,
                 const std::string& config_path, std::optional<std::size_t> cycles, const std::string& log_path,
                 std::size_t runs, std::size_t jobs) {
    RunConfig rc = read_config(config_path);
    SimulationConfig base = rc.simulation;
    base.agencies = agencies;
    base.faulty = parse_fault_spec(faulty);
    if (cycles) base.cycles = *cycles;
    if (runs == 0) throw ConfigError("--runs must be positive");
    const Tick length = base.effective_cycle_length();
    if (!log_path.empty()) {
        auto part = partition(read_log(log_path, "auto"), Periodic{length}, 0);
        for (std::size_t w = 0; w < part.windows.size(); ++w) {
            auto s = part.slice(w);
            base.cycle_ratings.emplace_back(s.begin(), s.end());
        }
    }
    validate(base);

    std::vector<SimulationConfig> configs;
    for (std::size_t k = 0; k < runs; ++k) {
        SimulationConfig c = base;
        c.seed = seed + k;
        if (log_path.empty()) {
            for (std::size_t cycle = 0; cycle < c.cycles; ++cycle) {
                SyntheticLogSpec spec;
                spec.t_begin = static_cast<Epoch>(cycle) * length;
                spec.t_end = spec.t_begin + length;
                c.cycle_ratings.push_back(synthetic_log(spec, c.seed * 1000003ULL + cycle));
            }
        }
        configs.push_back(std::move(c));
    }

    std::vector<SimulationResult> results(runs);
    const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, runs));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < runs; k += workers) results[k] = run_simulation(configs[k]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (std::size_t k = 0; k < runs; ++k) {
        fs::path dir = runs == 1 ? fs::path(out_dir) : fs::path(out_dir) / ("run-" + std::to_string(configs[k].seed));
        fs::create_directories(dir);
        const std::string summary = simulation_summary(results[k]);
        write_file(dir / "transcript.jsonl", transcript_jsonl(results[k].transcript));
        write_file(dir / "summary.csv", summary);
        if (runs > 1) std::cout << "# seed " << configs[k].seed << '\n';
        std::cout << summary;
    }
    return 0;
}

int cmd_validate(const std::string& snapshot, const std::string& reference, const std::string& config_path,
                 bool exclude_missing) {
    const RunConfig rc = read_config(config_path);
    const auto state = read_snapshot_file(snapshot);
    std::ifstream in(reference);
    if (!in) throw InputError("cannot open reference " + reference);
    const auto ref = parse_reference(in);
    const double r = pearson(ref, state, rc.engine.default_reputation,
                             exclude_missing ? MissingPolicy::Exclude : MissingPolicy::ScoreDefault);
    std::cout << "reference_participants," << ref.labels.size() << '\n' << "pearson," << fixed6(r) << '\n';
    return 0;
}

int cmd_stats(const std::string& snapshot) {
    const auto state = read_snapshot_file(snapshot);
    const auto s = distribution_stats(state);
    std::cout << "participants," << state.values.size() << '\n'
              << "gini," << fixed6(s.gini) << '\n'
              << "top_share," << fixed6(s.top_share) << '\n'
              << "nonzero_fraction," << fixed6(s.nonzero_fraction) << '\n';
    return 0;
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

int cmd_export(const std::string& snapshot, const std::string& log_path, const std::string& out_path,
               const std::string& config_path) {
    const RunConfig rc = read_config(config_path);
    const auto state = read_snapshot_file(snapshot);
    const auto records = read_log(log_path, "auto");
    std::map<std::pair<ParticipantId, ParticipantId>, std::size_t> edges;
    std::set<ParticipantId> nodes;
    for (const auto& [id, _] : state.values) nodes.insert(id);
    for (const auto& r : records) {
        ++edges[{r.rater, r.ratee}];
        nodes.insert(r.rater);
        nodes.insert(r.ratee);
    }
    std::string dot = "digraph reputation {\n";
    for (const auto& id : nodes)
        dot += "  " + dot_quote(id.str()) + " [weight=" + format_double(state.get(id, rc.engine.default_reputation)) +
               "];\n";
    for (const auto& [pair, count] : edges)
        dot += "  " + dot_quote(pair.first.str()) + " -> " + dot_quote(pair.second.str()) +
               " [weight=" + std::to_string(count) + "];\n";
    dot += "}\n";
    write_file(out_path, dot);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"liquidrank: incremental reputation engine, consensus simulator and evaluation tools"};
    app.require_subcommand(1);

    std::string log, config, window = "whole", out, format = "auto";
    Epoch origin = 0;
    auto* compute = app.add_subcommand("compute", "Compute reputation snapshots from a rating log");
    compute->add_option("--log", log, "Rating log (CSV or JSONL)")->required();
    compute->add_option("--config", config, "Key-value configuration file");
    compute->add_option("--window", window, "whole | tx | period:<N> | block:<N>")->capture_default_str();
    compute->add_option("--out", out, "Output directory")->required();
    compute->add_option("--origin", origin, "Origin timestamp t0")->capture_default_str();
    compute->add_option("--format", format, "auto | csv | jsonl")->capture_default_str();

    std::size_t agencies = 5, runs = 1, jobs = 1;
    std::string faulty = "none", sim_log;
    std::uint64_t seed = 0;
    std::optional<std::size_t> cycles;
    auto* simulate = app.add_subcommand("simulate", "Simulate reputation consensus among agencies");
    simulate->add_option("--agencies", agencies, "Number of agencies")->capture_default_str();
    simulate->add_option("--faulty", faulty, "Fault spec, e.g. a4=divergent,a1=silent")->capture_default_str();
    simulate->add_option("--seed", seed, "Random seed")->capture_default_str();
    simulate->add_option("--out", out, "Output directory")->required();
    simulate->add_option("--config", config, "Key-value configuration file");
    simulate->add_option("--cycles", cycles, "Number of consensus cycles (overrides config)");
    simulate->add_option("--log", sim_log, "Rating log split into cycles (default: synthetic ratings)");
    simulate->add_option("--runs", runs, "Independent runs with seeds seed, seed+1, ...")->capture_default_str();
    simulate->add_option("--jobs", jobs, "Runs executed in parallel")->capture_default_str();

    std::string snapshot, reference;
    bool exclude_missing = false;
    auto* validate_cmd = app.add_subcommand("validate", "Correlate a snapshot with a reference list");
    validate_cmd->add_option("--snapshot", snapshot, "Snapshot file")->required();
    validate_cmd->add_option("--reference", reference, "Reference list CSV participant,label")->required();
    validate_cmd->add_option("--config", config, "Configuration (for default_reputation)");
    validate_cmd->add_flag("--exclude-missing", exclude_missing, "Drop reference participants absent from the snapshot");

    auto* stats = app.add_subcommand("stats", "Distribution statistics of a snapshot");
    stats->add_option("--snapshot", snapshot, "Snapshot file")->required();

    auto* export_cmd = app.add_subcommand("export", "Export snapshot and rating graph as DOT");
    export_cmd->add_option("--snapshot", snapshot, "Snapshot file")->required();
    export_cmd->add_option("--log", log, "Rating log")->required();
    export_cmd->add_option("--out", out, "Output DOT file")->required();
    export_cmd->add_option("--config", config, "Configuration (for default_reputation)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*compute) return cmd_compute(log, config, window, out, origin, format);
        if (*simulate) return cmd_simulate(agencies, faulty, seed, out, config, cycles, sim_log, runs, jobs);
        if (*validate_cmd) return cmd_validate(snapshot, reference, config, exclude_missing);
        if (*stats) return cmd_stats(snapshot);
        if (*export_cmd) return cmd_export(snapshot, log, out, config);
    } catch (const UndefinedCorrelation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const NotFoundError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}
