// SPDX-License-Identifier: Apache-2.0
#include "diffcond/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "diffcond/frontend.hpp"

namespace diffcond {

StageError::StageError(const std::string& stage, const std::string& message)
    : std::runtime_error(stage + ": " + message), stage_(stage) {}

namespace {

class Stopwatch {
public:
    Stopwatch() : wall_(std::chrono::steady_clock::now()), cpu_(std::clock()) {}

    StageTiming done(const std::string& stage) const {
        const auto wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - wall_).count();
        const double cpu = 1000.0 * static_cast<double>(std::clock() - cpu_) / CLOCKS_PER_SEC;
        return StageTiming{stage, wall, cpu};
    }

private:
    std::chrono::steady_clock::time_point wall_;
    std::clock_t cpu_;
};

template <typename F>
auto stage(PipelineReport& report, const std::string& name, F&& f) {
    Stopwatch sw;
    try {
        auto out = f();
        report.timings.push_back(sw.done(name));
        return out;
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

nlohmann::json verdict_stats(const Verdict& v) {
    return {{"result", v.result == Verdict::Result::alarm ? "alarm" : (v.truncated ? "inconclusive" : "safe")},
            {"alarms", v.alarms.size()},
            {"explored_paths", v.explored_paths},
            {"covered_paths", v.covered_paths},
            {"truncated", v.truncated}};
}

} // namespace

nlohmann::json PipelineReport::to_json(bool with_timings) const {
    nlohmann::json j = {
        {"detector", detector_name(detector)},
        {"graph", {{"nodes", graph.nodes.size()}, {"edges", graph.edges.size()}, {"delta", graph.delta.size()}}},
        {"condition", {{"states", condition.states.size()}, {"accepting", condition.accepting.size()},
                       {"transitions", condition.transitions.size()}}},
        {"conditional", verdict_stats(conditional)},
    };
    if (residual)
        j["residual"] = {{"locations", residual->cfa.locations().size()}, {"edges", residual->cfa.edges().size()}};
    if (baseline)
        j["baseline"] = verdict_stats(*baseline);
    if (with_timings) {
        nlohmann::json t = nlohmann::json::array();
        for (const auto& s : timings)
            t.push_back({{"stage", s.stage}, {"wall_ms", s.wall_ms}, {"cpu_ms", s.cpu_ms}});
        j["timings"] = t;
    }
    return j;
}

PipelineReport run_pipeline(const std::string& original_src, const std::string& modified_src,
                            const PipelineOptions& options) {
    PipelineReport r;
    r.detector = options.detector;
    r.original = stage(r, "parse-original", [&] { return build_cfa(parse_program(original_src)); });
    r.modified = stage(r, "parse-modified", [&] { return build_cfa(parse_program(modified_src)); });
    OracleBounds bounds = options.bounds;
    if (bounds.input_vars.empty())
        bounds.input_vars = default_input_vars(*r.original, *r.modified);

    r.graph = stage(r, "detect", [&] { return run_detector(options.detector, *r.original, *r.modified, options.config); });
    r.condition = stage(r, "extract", [&] { return generate_condition(r.graph); });
    if (options.reduce) {
        r.residual = stage(r, "reduce", [&] { return reduce(*r.modified, r.condition); });
        r.conditional = stage(r, "verify", [&] {
            // Residual alarms are reported on the residual CFA; inputs are identical.
            return conditional_verify(r.residual->cfa, trivial_condition(), bounds);
        });
    } else {
        r.conditional = stage(r, "verify", [&] { return conditional_verify(*r.modified, r.condition, bounds); });
    }
    if (options.baseline)
        r.baseline = stage(r, "baseline", [&] { return conditional_verify(*r.modified, trivial_condition(), bounds); });

    if (!options.out_dir.empty()) {
        stage(r, "write", [&] {
            namespace fs = std::filesystem;
            const fs::path dir(options.out_dir);
            fs::create_directories(dir);
            write_file(dir / "original.cfa.json", serialize(*r.original));
            write_file(dir / "modified.cfa.json", serialize(*r.modified));
            write_file(dir / "graph.json", dump_json(graph_to_json(r.graph)));
            write_file(dir / "graph.dot", graph_to_dot(r.graph));
            write_file(dir / "condition.json", dump_json(condition_to_json(r.condition)));
            write_file(dir / "condition.dot", condition_to_dot(r.condition));
            if (r.residual) {
                write_file(dir / "residual.json", serialize(r.residual->cfa));
                write_file(dir / "residual.map.json", dump_json(mapping_to_json(*r.residual)));
            }
            const Cfa& verified = r.residual ? r.residual->cfa : *r.modified;
            write_file(dir / "verdict.json", dump_json(verdict_to_json(verified, r.conditional)));
            write_file(dir / "report.json", dump_json(r.to_json(false)));
            return 0;
        });
    }
    return r;
}

} // namespace diffcond
