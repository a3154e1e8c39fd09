#include "rss/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rss/manifest.hpp"
#include "rss/optimizer.hpp"

namespace rss::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Preset {
    MapGenParams map;
    int destinations;
};

std::optional<Preset> preset_by_name(const std::string& name) {
    // Four generator setups spanning two floor sizes, each in a dense and a
    // sparse chute arrangement.
    if (name == "setup1") return Preset{{57, 33, 2, 2, 20, 1, 1, 0}, 99};
    if (name == "setup2") return Preset{{57, 33, 1, 1, 20, 1, 1, 0}, 41};
    if (name == "setup3") return Preset{{86, 50, 2, 3, 30, 1, 1, 0}, 299};
    if (name == "setup4") return Preset{{86, 50, 1, 2, 30, 2, 1, 0}, 138};
    return std::nullopt;
}

std::string profile_json(const DestinationProfile& p) {
    ordered_json j;
    j["format"] = "rss-profile-v1";
    j["destinations"] = p.n_destinations;
    j["recirc_volume"] = p.recirc_volume;
    j["volumes"] = p.volumes;
    return j.dump(2) + "\n";
}

DestinationProfile load_profile(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "rss-profile-v1") {
        throw std::runtime_error("not an rss-profile-v1 file");
    }
    return make_profile(j.at("destinations").get<int>(),
                        j.value("recirc_volume", 0.05));
}

int default_workers() {
    if (const char* env = std::getenv("RSS_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    if (out.empty()) throw std::runtime_error("empty integer list");
    return out;
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
    MeanStderr ms;
    for (double x : xs) ms.mean += x;
    ms.mean /= double(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - ms.mean) * (x - ms.mean);
        ms.stderr_ = std::sqrt(ss / double(xs.size() - 1) / double(xs.size()));
    }
    return ms;
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return dir.empty() ? name : (fs::path(dir) / name).string();
}

// ---------------------------------------------------------------------------

struct GenMapArgs {
    std::string preset;
    MapGenParams params;
    int destinations = 0;
    double recirc_volume = 0.05;
    std::string out = "map.txt";
    std::string profile_out;
};

int cmd_gen_map(const GenMapArgs& a) {
    MapGenParams params = a.params;
    int destinations = a.destinations;
    if (!a.preset.empty()) {
        const auto preset = preset_by_name(a.preset);
        if (!preset) throw std::runtime_error("unknown preset " + a.preset);
        const uint64_t seed = params.seed;
        params = preset->map;
        params.seed = seed;
        if (destinations == 0) destinations = preset->destinations;
    }
    if (params.width == 0 || params.height == 0) {
        throw std::runtime_error("need --preset or explicit --width/--height");
    }

    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "gen-map";
    manifest.seed = params.seed;
    {
        std::ostringstream cfg;
        cfg << "width=" << params.width << " height=" << params.height
            << " block_rows=" << params.chute_block_rows
            << " block_cols=" << params.chute_block_cols
            << " workstations=" << params.workstation_count
            << " corridor_x=" << params.corridor_x
            << " corridor_y=" << params.corridor_y << " seed=" << params.seed
            << " destinations=" << destinations;
        manifest.config = cfg.str();
    }

    const auto started = std::chrono::steady_clock::now();
    const Floorplan fp = generate_map(params);
    manifest.write_output(a.out, fp.serialize());

    if (!a.profile_out.empty() || destinations > 0) {
        if (destinations <= 0) {
            throw std::runtime_error("--n-dest required to emit a profile");
        }
        if (destinations + 1 > fp.chute_count()) {
            throw std::domain_error("profile needs more chutes than destinations");
        }
        const std::string path =
            a.profile_out.empty() ? a.out + ".profile.json" : a.profile_out;
        manifest.write_output(path,
                              profile_json(make_profile(destinations, a.recirc_volume)));
    }

    manifest.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    manifest.save(a.out + ".manifest.json");
    std::cout << "map " << a.out << ": " << fp.height() << "x" << fp.width()
              << ", " << fp.chute_count() << " chutes, "
              << fp.workstations().size() << " workstations, "
              << fp.endpoints().size() << " endpoints\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::string map_path;
    std::string mapping_path;
    std::string profile_path;
    std::string robots = "100";
    int horizon = 1000;
    int replicates = 10;
    uint64_t seed = 0;
    double alpha = 8.0;
    int chute_capacity = 50;
    bool apply_repair = false;
    bool events_out = false;  // dump replicate 0's event log per robot count
    double delta = 1.5;
    std::string out_dir = ".";
};

const char* event_name(EventKind k) {
    switch (k) {
        case EventKind::Move: return "move";
        case EventKind::Wait: return "wait";
        case EventKind::Pickup: return "pickup";
        case EventKind::DropSorted: return "drop_sorted";
        case EventKind::DropRecirc: return "drop_recirc";
        case EventKind::ChuteClose: return "chute_close";
        case EventKind::ChuteOpen: return "chute_open";
    }
    return "?";
}

std::string event_log_text(const std::vector<Event>& events) {
    std::string out = "timestep robot event row col chute\n";
    for (const Event& e : events) {
        out += std::to_string(e.timestep) + " " + std::to_string(e.robot) + " " +
               event_name(e.kind) + " " + std::to_string(e.cell.row) + " " +
               std::to_string(e.cell.col) + " " + std::to_string(e.chute) + "\n";
    }
    return out;
}

int cmd_evaluate(const EvaluateArgs& a) {
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "evaluate";
    manifest.seed = a.seed;
    {
        std::ostringstream cfg;
        cfg << "map=" << a.map_path << " mapping=" << a.mapping_path
            << " profile=" << a.profile_path << " robots=" << a.robots
            << " horizon=" << a.horizon << " replicates=" << a.replicates
            << " seed=" << a.seed << " alpha=" << a.alpha
            << " chute_capacity=" << a.chute_capacity
            << " repair=" << a.apply_repair << " events_out=" << a.events_out
            << " delta=" << a.delta;
        manifest.config = cfg.str();
    }

    const std::string map_text = read_file(a.map_path);
    const std::string mapping_text = read_file(a.mapping_path);
    const std::string profile_text = read_file(a.profile_path);
    manifest.add_input(a.map_path, map_text);
    manifest.add_input(a.mapping_path, mapping_text);
    manifest.add_input(a.profile_path, profile_text);

    const Floorplan fp = Floorplan::parse(map_text);
    TaskMapping mapping = parse_mapping(mapping_text);
    const DestinationProfile profile = load_profile(profile_text);
    if (mapping.chute_count() != fp.chute_count()) {
        throw std::runtime_error("mapping chute count does not match map");
    }
    if (mapping.n_destinations != profile.n_destinations) {
        throw std::runtime_error("mapping destination count does not match profile");
    }
    if (const auto violations = validate(mapping); !violations.empty()) {
        if (!a.apply_repair) {
            throw std::runtime_error(
                "mapping is invalid (" + std::to_string(violations.size()) +
                " empty destinations); pass --repair to fix it first");
        }
        const RepairOutcome fixed = repair(mapping, profile, a.delta);
        std::cerr << "repair reassigned " << fixed.changed_chutes << " chutes\n";
        mapping = fixed.mapping;
    }

    const std::vector<int> robot_counts = parse_int_list(a.robots);
    const auto started = std::chrono::steady_clock::now();
    const NavCache nav(fp);

    ordered_json out;
    out["format"] = "rss-result-v1";
    out["horizon"] = a.horizon;
    out["replicates"] = a.replicates;
    out["rows"] = ordered_json::array();
    std::string csv =
        "robots,replicate,seed,throughput,recirculation_rate,sorted,recirculated\n";

    for (int robots : robot_counts) {
        std::vector<double> throughput, recirc;
        ordered_json runs = ordered_json::array();
        for (int r = 0; r < a.replicates; ++r) {
            SimConfig cfg;
            cfg.robot_count = robots;
            cfg.horizon = a.horizon;
            cfg.alpha = a.alpha;
            cfg.chute_capacity = a.chute_capacity;
            cfg.seed = a.seed + uint64_t(r);
            cfg.record_events = a.events_out && r == 0;
            const SimResult res = run(fp, nav, mapping, profile, cfg);
            if (cfg.record_events) {
                ensure_dir(a.out_dir);
                manifest.write_output(
                    join_path(a.out_dir,
                              "events_r" + std::to_string(robots) + ".log"),
                    event_log_text(res.events));
            }
            throughput.push_back(res.throughput);
            recirc.push_back(res.recirculation_rate);
            runs.push_back({{"throughput", res.throughput},
                            {"recirculation_rate", res.recirculation_rate},
                            {"sorted", res.sorted_count},
                            {"recirculated", res.recirculated_count},
                            {"seed", res.seed},
                            {"N_T", res.horizon},
                            {"N_a", res.robot_count}});
            csv += std::to_string(robots) + "," + std::to_string(r) + "," +
                   std::to_string(res.seed) + "," + std::to_string(res.throughput) +
                   "," + std::to_string(res.recirculation_rate) + "," +
                   std::to_string(res.sorted_count) + "," +
                   std::to_string(res.recirculated_count) + "\n";
        }
        const MeanStderr thr = mean_stderr(throughput);
        const MeanStderr rec = mean_stderr(recirc);
        out["rows"].push_back({{"robots", robots},
                               {"throughput_mean", thr.mean},
                               {"throughput_stderr", thr.stderr_},
                               {"recirculation_rate_mean", rec.mean},
                               {"recirculation_rate_stderr", rec.stderr_},
                               {"runs", runs}});
        std::cout << "robots " << robots << ": throughput " << thr.mean << " +- "
                  << thr.stderr_ << ", recirculation " << rec.mean << " +- "
                  << rec.stderr_ << "\n";
    }

    ensure_dir(a.out_dir);
    manifest.write_output(join_path(a.out_dir, "result.json"), out.dump(2) + "\n");
    manifest.write_output(join_path(a.out_dir, "result.csv"), csv);
    manifest.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    manifest.save(join_path(a.out_dir, "result.manifest.json"));
    return 0;
}

// ---------------------------------------------------------------------------

struct OptimizeArgs {
    std::string map_path;
    std::string profile_path;
    int robots = 100;
    int horizon = 1000;
    int n_eval = 1000;
    int population = 20;
    int replicates = 1;
    uint64_t seed = 0;
    int workers = 0;
    bool greedy_init = false;
    double delta = 1.5;
    double alpha = 8.0;
    int chute_capacity = 50;
    std::string baseline;  // "", "min-dist", "cluster"
    std::string out_dir = ".";
};

EAConfig make_ea_config(const OptimizeArgs& a) {
    EAConfig cfg;
    cfg.sim.robot_count = a.robots;
    cfg.sim.horizon = a.horizon;
    cfg.sim.alpha = a.alpha;
    cfg.sim.chute_capacity = a.chute_capacity;
    cfg.total_evaluations = a.n_eval;
    cfg.population = a.population;
    cfg.replicates = a.replicates;
    cfg.greedy_init = a.greedy_init;
    cfg.seed = a.seed;
    cfg.workers = a.workers >= 1 ? a.workers : default_workers();
    cfg.delta = a.delta;
    return cfg;
}

std::string optimize_config_line(const OptimizeArgs& a, const std::string& mode) {
    std::ostringstream cfg;
    cfg << "mode=" << mode << " map=" << a.map_path << " profile=" << a.profile_path
        << " robots=" << a.robots << " horizon=" << a.horizon
        << " n_eval=" << a.n_eval << " lambda=" << a.population
        << " n_e=" << a.replicates << " seed=" << a.seed
        << " greedy_init=" << a.greedy_init << " delta=" << a.delta
        << " alpha=" << a.alpha << " chute_capacity=" << a.chute_capacity;
    return cfg.str();
}

int cmd_optimize(const OptimizeArgs& a) {
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "optimize";
    manifest.seed = a.seed;
    manifest.config = optimize_config_line(a, a.baseline.empty() ? "ea" : a.baseline);

    const std::string map_text = read_file(a.map_path);
    const std::string profile_text = read_file(a.profile_path);
    manifest.add_input(a.map_path, map_text);
    manifest.add_input(a.profile_path, profile_text);
    const Floorplan fp = Floorplan::parse(map_text);
    const DestinationProfile profile = load_profile(profile_text);

    ensure_dir(a.out_dir);
    const auto started = std::chrono::steady_clock::now();

    if (!a.baseline.empty()) {
        TaskMapping m;
        if (a.baseline == "min-dist") {
            m = init_min_dist(fp, profile);
        } else if (a.baseline == "cluster") {
            m = init_cluster(fp, profile);
        } else {
            throw std::runtime_error("unknown baseline " + a.baseline);
        }
        manifest.write_output(join_path(a.out_dir, a.baseline + ".map"),
                              serialize_mapping(m));
        manifest.wall_clock_sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();
        manifest.save(join_path(a.out_dir, a.baseline + ".manifest.json"));
        return 0;
    }

    const EAConfig cfg = make_ea_config(a);
    const EAResult result = ea_run(fp, profile, cfg);

    std::string history = "generation,evals_used,best_objective,best_amdw,best_acd\n";
    for (const GenerationStat& g : result.history) {
        history += std::to_string(g.generation) + "," +
                   std::to_string(g.evaluations_used) + "," +
                   std::to_string(g.best_objective) + "," +
                   std::to_string(g.best_amdw) + "," + std::to_string(g.best_acd) +
                   "\n";
    }

    ordered_json summary;
    summary["format"] = "rss-ea-summary-v1";
    summary["evaluations"] = result.evaluations;
    summary["best_objective"] = result.best.objective;
    summary["best_amdw"] = result.best.amdw;
    summary["best_acd"] = result.best.acd;
    if (result.min_dist_objective) {
        summary["min_dist_objective"] = *result.min_dist_objective;
    }
    if (result.cluster_objective) {
        summary["cluster_objective"] = *result.cluster_objective;
    }

    manifest.write_output(join_path(a.out_dir, "best.map"),
                          serialize_mapping(result.best.mapping));
    manifest.write_output(join_path(a.out_dir, "history.csv"), history);
    manifest.write_output(join_path(a.out_dir, "summary.json"),
                          summary.dump(2) + "\n");
    manifest.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    manifest.save(join_path(a.out_dir, "optimize.manifest.json"));
    std::cout << "best objective " << result.best.objective << " after "
              << result.evaluations << " evaluations\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct QdArgs {
    OptimizeArgs base;
    std::string resolution = "25x25";
};

int cmd_qd(const QdArgs& a) {
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "qd";
    manifest.seed = a.base.seed;
    manifest.config =
        optimize_config_line(a.base, "map-elites") + " resolution=" + a.resolution;

    const std::string map_text = read_file(a.base.map_path);
    const std::string profile_text = read_file(a.base.profile_path);
    manifest.add_input(a.base.map_path, map_text);
    manifest.add_input(a.base.profile_path, profile_text);
    const Floorplan fp = Floorplan::parse(map_text);
    const DestinationProfile profile = load_profile(profile_text);

    QDConfig cfg;
    cfg.ea = make_ea_config(a.base);
    cfg.ea.greedy_init = true;
    {
        const auto x = a.resolution.find('x');
        if (x == std::string::npos) throw std::runtime_error("resolution must be AxB");
        cfg.res_amdw = std::stoi(a.resolution.substr(0, x));
        cfg.res_acd = std::stoi(a.resolution.substr(x + 1));
    }

    ensure_dir(a.base.out_dir);
    const std::string elites_dir = join_path(a.base.out_dir, "elites");
    ensure_dir(elites_dir);
    const auto started = std::chrono::steady_clock::now();

    const QDResult result = map_elites_run(fp, profile, cfg);
    const Archive& archive = result.archive;

    std::string csv = "cell_amdw,cell_acd,amdw,acd,objective,mapping_file\n";
    ordered_json rows = ordered_json::array();
    for (int ax = 0; ax < archive.res_amdw; ++ax) {
        for (int ay = 0; ay < archive.res_acd; ++ay) {
            const auto& cell = archive.cells[ax * archive.res_acd + ay];
            if (!cell) continue;
            const std::string name =
                "elite_" + std::to_string(ax) + "_" + std::to_string(ay) + ".map";
            manifest.write_output(join_path(elites_dir, name),
                                  serialize_mapping(cell->mapping));
            csv += std::to_string(ax) + "," + std::to_string(ay) + "," +
                   std::to_string(cell->amdw) + "," + std::to_string(cell->acd) +
                   "," + std::to_string(cell->objective) + ",elites/" + name + "\n";
            rows.push_back({{"cell_amdw", ax},
                            {"cell_acd", ay},
                            {"amdw", cell->amdw},
                            {"acd", cell->acd},
                            {"objective", cell->objective},
                            {"mapping_file", "elites/" + name}});
        }
    }

    ordered_json out;
    out["format"] = "rss-archive-v1";
    out["resolution"] = {archive.res_amdw, archive.res_acd};
    out["amdw_bounds"] = {archive.amdw_lo, archive.amdw_hi};
    out["acd_bounds"] = {archive.acd_lo, archive.acd_hi};
    out["evaluations"] = result.evaluations;
    out["qd_score"] = archive.qd_score();
    out["occupied"] = archive.occupied_count();
    out["cells"] = rows;

    manifest.write_output(join_path(a.base.out_dir, "archive.csv"), csv);
    manifest.write_output(join_path(a.base.out_dir, "archive.json"),
                          out.dump(2) + "\n");
    manifest.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    manifest.save(join_path(a.base.out_dir, "qd.manifest.json"));
    std::cout << "archive: " << archive.occupied_count() << " occupied cells, QD score "
              << archive.qd_score() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct RepairArgs {
    std::string mapping_path;
    std::string profile_path;
    double delta = 1.5;
    std::string out = "repaired.map";
};

int cmd_repair(const RepairArgs& a) {
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.command = "repair";
    {
        std::ostringstream cfg;
        cfg << "mapping=" << a.mapping_path << " profile=" << a.profile_path
            << " delta=" << a.delta;
        manifest.config = cfg.str();
    }

    const std::string mapping_text = read_file(a.mapping_path);
    const std::string profile_text = read_file(a.profile_path);
    manifest.add_input(a.mapping_path, mapping_text);
    manifest.add_input(a.profile_path, profile_text);
    const TaskMapping input = parse_mapping(mapping_text);
    const DestinationProfile profile = load_profile(profile_text);

    const auto started = std::chrono::steady_clock::now();
    const RepairOutcome outcome = repair(input, profile, a.delta);

    ordered_json report;
    report["format"] = "rss-repair-report-v1";
    report["changed_chutes"] = outcome.changed_chutes;
    report["counts_before"] = outcome.counts_before;
    report["counts_after"] = outcome.counts_after;

    manifest.write_output(a.out, serialize_mapping(outcome.mapping));
    manifest.write_output(a.out + ".report.json", report.dump(2) + "\n");
    manifest.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    manifest.save(a.out + ".manifest.json");
    std::cout << "repair reassigned " << outcome.changed_chutes << " of "
              << input.chute_count() << " chutes\n";
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Sortation-floor task-mapping simulator and optimizer"};
    app.require_subcommand(1);

    GenMapArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-map", "Generate a sortation floor map");
    gen_cmd->set_config("--config");
    gen_cmd->add_option("--preset", gen.preset, "setup1..setup4 parameter presets");
    gen_cmd->add_option("--width", gen.params.width);
    gen_cmd->add_option("--height", gen.params.height);
    gen_cmd->add_option("--block-rows", gen.params.chute_block_rows);
    gen_cmd->add_option("--block-cols", gen.params.chute_block_cols);
    gen_cmd->add_option("--workstations", gen.params.workstation_count);
    gen_cmd->add_option("--corridor-x", gen.params.corridor_x);
    gen_cmd->add_option("--corridor-y", gen.params.corridor_y);
    gen_cmd->add_option("--seed", gen.params.seed);
    gen_cmd->add_option("--n-dest", gen.destinations, "emit a destination profile");
    gen_cmd->add_option("--recirc-volume", gen.recirc_volume);
    gen_cmd->add_option("--out", gen.out);
    gen_cmd->add_option("--profile-out", gen.profile_out);

    EvaluateArgs eval;
    auto* eval_cmd = app.add_subcommand("evaluate", "Simulate a task mapping");
    eval_cmd->set_config("--config");
    eval_cmd->add_option("--map", eval.map_path)->required();
    eval_cmd->add_option("--mapping", eval.mapping_path)->required();
    eval_cmd->add_option("--profile", eval.profile_path)->required();
    eval_cmd->add_option("--robots", eval.robots, "count or comma list for sweeps");
    eval_cmd->add_option("--horizon", eval.horizon);
    eval_cmd->add_option("--replicates", eval.replicates);
    eval_cmd->add_option("--seed", eval.seed)->required();
    eval_cmd->add_option("--alpha", eval.alpha);
    eval_cmd->add_option("--chute-capacity", eval.chute_capacity);
    eval_cmd->add_flag("--repair", eval.apply_repair, "repair an invalid mapping");
    eval_cmd->add_flag("--events-out", eval.events_out,
                       "write replicate 0's event log per robot count");
    eval_cmd->add_option("--delta", eval.delta);
    eval_cmd->add_option("--out-dir", eval.out_dir);

    OptimizeArgs opt;
    auto* opt_cmd = app.add_subcommand("optimize", "Search for a high-throughput mapping");
    opt_cmd->set_config("--config");
    opt_cmd->add_option("--map", opt.map_path)->required();
    opt_cmd->add_option("--profile", opt.profile_path)->required();
    opt_cmd->add_option("--robots", opt.robots);
    opt_cmd->add_option("--horizon,--n-t", opt.horizon);
    opt_cmd->add_option("--n-eval", opt.n_eval);
    opt_cmd->add_option("--lambda", opt.population);
    opt_cmd->add_option("--n-e", opt.replicates);
    opt_cmd->add_option("--seed", opt.seed)->required();
    opt_cmd->add_option("--workers", opt.workers, "0 = machine default");
    opt_cmd->add_flag("--greedy-init", opt.greedy_init);
    opt_cmd->add_option("--delta", opt.delta);
    opt_cmd->add_option("--alpha", opt.alpha);
    opt_cmd->add_option("--chute-capacity", opt.chute_capacity);
    opt_cmd->add_option("--baseline", opt.baseline,
                        "emit min-dist or cluster mapping without search");
    opt_cmd->add_option("--out-dir", opt.out_dir);

    QdArgs qd;
    auto* qd_cmd = app.add_subcommand("qd", "MAP-Elites archive over (AMDW, ACD)");
    qd_cmd->set_config("--config");
    qd_cmd->add_option("--map", qd.base.map_path)->required();
    qd_cmd->add_option("--profile", qd.base.profile_path)->required();
    qd_cmd->add_option("--robots", qd.base.robots);
    qd_cmd->add_option("--horizon,--n-t", qd.base.horizon);
    qd_cmd->add_option("--n-eval", qd.base.n_eval);
    qd_cmd->add_option("--lambda", qd.base.population);
    qd_cmd->add_option("--n-e", qd.base.replicates);
    qd_cmd->add_option("--seed", qd.base.seed)->required();
    qd_cmd->add_option("--workers", qd.base.workers);
    qd_cmd->add_option("--delta", qd.base.delta);
    qd_cmd->add_option("--alpha", qd.base.alpha);
    qd_cmd->add_option("--chute-capacity", qd.base.chute_capacity);
    qd_cmd->add_option("--resolution", qd.resolution, "archive grid, e.g. 25x25");
    qd_cmd->add_option("--out-dir", qd.base.out_dir);

    RepairArgs rep;
    auto* rep_cmd = app.add_subcommand("repair", "Repair a mapping to validity");
    rep_cmd->set_config("--config");
    rep_cmd->add_option("--mapping", rep.mapping_path)->required();
    rep_cmd->add_option("--profile", rep.profile_path)->required();
    rep_cmd->add_option("--delta", rep.delta);
    rep_cmd->add_option("--out", rep.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen_map(gen);
        if (eval_cmd->parsed()) return cmd_evaluate(eval);
        if (opt_cmd->parsed()) return cmd_optimize(opt);
        if (qd_cmd->parsed()) return cmd_qd(qd);
        if (rep_cmd->parsed()) return cmd_repair(rep);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
    return 2;
}

int run(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.push_back("rss");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& s : full) argv.push_back(s.c_str());
    return run(int(argv.size()), argv.data());
}

}  // namespace rss::cli
