// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "diffcond/campaign.hpp"
#include "diffcond/condition.hpp"
#include "diffcond/condverify.hpp"
#include "diffcond/frontend.hpp"
#include "diffcond/pipeline.hpp"
#include "diffcond/reducer.hpp"
#include "diffcond/taskgen.hpp"

using namespace diffcond;

namespace {

bool use_color() {
    const char* env = std::getenv("DIFFCOND_COLOR");
    if (env && std::string(env) == "0")
        return false;
    return isatty(STDOUT_FILENO) != 0;
}

std::string paint(const std::string& text, const char* code) {
    return use_color() ? std::string("\033[") + code + "m" + text + "\033[0m" : text;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

Cfa load_program(const std::string& path) {
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        return deserialize(slurp(path));
    return build_cfa(parse_program(slurp(path)));
}

VarSet parse_inputs(const std::string& list) {
    VarSet out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.insert(item);
    return out;
}

struct BoundsArgs {
    int bound = 4;
    int depth = 40;
    std::string inputs;

    void attach(CLI::App* app) {
        app->add_option("--bound", bound, "inputs range over [-B, B]")->capture_default_str();
        app->add_option("--depth", depth, "maximal steps per path")->capture_default_str();
        app->add_option("--inputs", inputs, "comma-separated input variables (default: read before written)");
    }

    OracleBounds make(const Cfa& a, const Cfa& b) const {
        OracleBounds o{bound, depth, parse_inputs(inputs)};
        if (inputs.empty())
            o.input_vars = default_input_vars(a, b);
        validate_bounds(o);
        return o;
    }
};

struct DetectorArgs {
    std::string detector = "dp";
    bool align_same_write = false;
    bool no_followup = false;
    bool no_implication = false;

    void attach(CLI::App* app) {
        app->add_option("--detector", detector, "syn or dp")->check(CLI::IsMember({"syn", "dp"}))->capture_default_str();
        app->add_flag("--align-same-write", align_same_write, "keep lockstep on assignments writing the same variables");
        app->add_flag("--no-followup-error-search", no_followup, "do not search the original for a nearby error");
        app->add_flag("--no-implication", no_implication, "match assumes only when identical");
    }

    DetectorConfig config() const { return DetectorConfig{align_same_write, !no_followup, !no_implication}; }
};

void print_summary_line(bool pass, const std::string& text) {
    std::cout << (pass ? paint("PASS", "32") : paint("FAIL", "31")) << "  " << text << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"diffcond: difference conditions and conditional verification for .imp programs"};
    app.require_subcommand(1);

    // parse
    auto* parse = app.add_subcommand("parse", "compile a program to a CFA");
    std::string parse_program_path, parse_out, parse_dot, parse_format = "json";
    parse->add_option("--program", parse_program_path)->required();
    parse->add_option("--out", parse_out, "output file (default stdout)");
    parse->add_option("--format", parse_format)->check(CLI::IsMember({"json", "dot"}))->capture_default_str();
    parse->add_option("--dot", parse_dot, "also write DOT here");
    parse->callback([&] {
        const Cfa cfa = load_program(parse_program_path);
        emit(parse_out, parse_format == "dot" ? cfa_to_dot(cfa) : serialize(cfa));
        if (!parse_dot.empty())
            emit(parse_dot, cfa_to_dot(cfa));
    });

    // diff
    auto* diff = app.add_subcommand("diff", "compute a difference graph");
    std::string diff_orig, diff_mod, diff_out, diff_dot;
    DetectorArgs diff_det;
    diff->add_option("--original", diff_orig)->required();
    diff->add_option("--modified", diff_mod)->required();
    diff->add_option("--out", diff_out, "graph JSON (default stdout)");
    diff->add_option("--dot", diff_dot);
    diff_det.attach(diff);
    diff->callback([&] {
        const auto dg = run_detector(parse_detector(diff_det.detector), load_program(diff_orig),
                                     load_program(diff_mod), diff_det.config());
        emit(diff_out, dump_json(graph_to_json(dg)));
        if (!diff_dot.empty())
            emit(diff_dot, graph_to_dot(dg));
    });

    // extract
    auto* extract = app.add_subcommand("extract", "compute a difference graph and its condition");
    std::string ex_orig, ex_mod, ex_out, ex_graph, ex_dot;
    DetectorArgs ex_det;
    extract->add_option("--original", ex_orig)->required();
    extract->add_option("--modified", ex_mod)->required();
    extract->add_option("--out", ex_out, "condition JSON (default stdout)");
    extract->add_option("--graph", ex_graph, "also write the difference graph JSON");
    extract->add_option("--dot", ex_dot, "condition DOT");
    ex_det.attach(extract);
    extract->callback([&] {
        const auto dg = run_detector(parse_detector(ex_det.detector), load_program(ex_orig), load_program(ex_mod),
                                     ex_det.config());
        const auto cond = generate_condition(dg);
        emit(ex_out, dump_json(condition_to_json(cond)));
        if (!ex_graph.empty())
            emit(ex_graph, dump_json(graph_to_json(dg)));
        if (!ex_dot.empty())
            emit(ex_dot, condition_to_dot(cond));
    });

    // reduce
    auto* red = app.add_subcommand("reduce", "build the residual CFA of uncovered paths");
    std::string red_prog, red_cond, red_out, red_map;
    red->add_option("--program", red_prog)->required();
    red->add_option("--condition", red_cond)->required();
    red->add_option("--out", red_out, "residual CFA JSON (default stdout)");
    red->add_option("--map", red_map, "residual location mapping JSON");
    red->callback([&] {
        const auto r = reduce(load_program(red_prog), condition_from_json(nlohmann::json::parse(slurp(red_cond))));
        emit(red_out, serialize(r.cfa));
        if (!red_map.empty())
            emit(red_map, dump_json(mapping_to_json(r)));
    });

    // verify
    auto* ver = app.add_subcommand("verify", "bounded conditional verification");
    std::string ver_prog, ver_cond;
    bool ver_json = false;
    BoundsArgs ver_bounds;
    int exit_code = 0;
    ver->add_option("--program", ver_prog)->required();
    ver->add_option("--condition", ver_cond, "condition JSON (default: verify every path)");
    ver->add_flag("--json", ver_json, "print the verdict as JSON");
    ver_bounds.attach(ver);
    ver->callback([&] {
        const Cfa p = load_program(ver_prog);
        const Condition cond =
            ver_cond.empty() ? trivial_condition() : condition_from_json(nlohmann::json::parse(slurp(ver_cond)));
        const Verdict v = conditional_verify(p, cond, ver_bounds.make(p, p));
        if (ver_json) {
            std::cout << dump_json(verdict_to_json(p, v));
        } else {
            const std::string label = v.result == Verdict::Result::alarm ? paint("alarm", "31")
                                      : v.truncated                      ? paint("inconclusive", "33")
                                                                         : paint("safe", "32");
            std::cout << label << ": explored " << v.explored_paths << ", covered " << v.covered_paths << ", alarms "
                      << v.alarms.size() << "\n";
            for (const auto& a : v.alarms)
                std::cout << "  input " << a.initial.to_string() << "\n";
        }
        exit_code = v.exit_code();
    });

    // oracle
    auto* orc = app.add_subcommand("oracle", "brute-force error paths or regression-bug paths");
    std::string orc_orig, orc_mod;
    bool orc_dump = false;
    BoundsArgs orc_bounds;
    orc->add_option("--original", orc_orig, "original program (omit for plain error paths)");
    orc->add_option("--modified", orc_mod)->required();
    orc->add_flag("--dump", orc_dump, "print each path as JSON");
    orc_bounds.attach(orc);
    orc->callback([&] {
        const Cfa m = load_program(orc_mod);
        std::vector<ExecPath> paths;
        std::size_t total = 0;
        if (orc_orig.empty()) {
            const auto b = orc_bounds.make(m, m);
            total = enumerate_paths(m, b).size();
            paths = error_paths(m, b);
        } else {
            const Cfa o = load_program(orc_orig);
            const auto b = orc_bounds.make(o, m);
            total = enumerate_paths(m, b).size();
            paths = regression_bug_paths(o, m, b);
        }
        if (orc_dump) {
            nlohmann::json out = nlohmann::json::array();
            for (const auto& p : paths)
                out.push_back({{"input", state_to_json(p.initial)}, {"path", path_to_json(m, p)}});
            std::cout << dump_json(out);
            return;
        }
        std::cout << "paths: " << total << "\n"
                  << (orc_orig.empty() ? "error paths: " : "regression-bug paths: ") << paths.size() << "\n";
        for (const auto& p : paths)
            std::cout << "  input " << p.initial.to_string() << "\n";
    });

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "detect, extract, optionally reduce, and verify");
    std::string pipe_orig, pipe_mod, pipe_dir;
    bool pipe_reduce = false, pipe_baseline = false;
    DetectorArgs pipe_det;
    BoundsArgs pipe_bounds;
    pipe->add_option("--original", pipe_orig)->required();
    pipe->add_option("--modified", pipe_mod)->required();
    pipe->add_option("--out-dir", pipe_dir, "write all intermediate artifacts here");
    pipe->add_flag("--reduce", pipe_reduce, "verify the residual program instead of steering by the condition");
    pipe->add_flag("--baseline", pipe_baseline, "also run unconditional verification");
    pipe_det.attach(pipe);
    pipe_bounds.attach(pipe);
    pipe->callback([&] {
        PipelineOptions opt;
        opt.detector = parse_detector(pipe_det.detector);
        opt.config = pipe_det.config();
        opt.bounds = OracleBounds{pipe_bounds.bound, pipe_bounds.depth, parse_inputs(pipe_bounds.inputs)};
        opt.reduce = pipe_reduce;
        opt.baseline = pipe_baseline;
        opt.out_dir = pipe_dir;
        const auto report = run_pipeline(slurp(pipe_orig), slurp(pipe_mod), opt);
        std::cout << dump_json(report.to_json());
        exit_code = report.conditional.exit_code();
    });

    // fuzz
    auto* fuzz = app.add_subcommand("fuzz", "cross-check everything against the oracle on random pairs");
    std::uint64_t fuzz_seeds = 500, fuzz_start = 0;
    int fuzz_bound = 4, fuzz_depth = 40;
    std::string fuzz_corpus;
    bool fuzz_verbose = false, fuzz_division = false;
    fuzz->add_option("--seeds", fuzz_seeds)->capture_default_str();
    fuzz->add_option("--start", fuzz_start, "first seed")->capture_default_str();
    fuzz->add_option("--bound", fuzz_bound)->capture_default_str();
    fuzz->add_option("--depth", fuzz_depth)->capture_default_str();
    fuzz->add_option("--corpus", fuzz_corpus, "directory of <name>.orig.imp / <name>.mod.imp pairs");
    fuzz->add_flag("-v,--verbose", fuzz_verbose, "print every failing pair");
    fuzz->add_flag("--division", fuzz_division, "let generated programs divide by variables");
    fuzz->callback([&] {
        const auto start = std::chrono::steady_clock::now();
        CampaignSummary sum;
        const OracleBounds bounds{fuzz_bound, fuzz_depth, {}};
        if (!fuzz_corpus.empty())
            for (const auto& p : load_corpus(fuzz_corpus))
                sum.add(check_pair(p.name, p.original, p.modified, bounds));
        TaskParams params;
        params.allow_division = fuzz_division;
        for (std::uint64_t s = fuzz_start; s < fuzz_start + fuzz_seeds; ++s) {
            const Task t = generate_task(s, params);
            const auto c = check_pair("seed " + std::to_string(s), t.original, t.modified, bounds);
            if (fuzz_verbose && !c.ok())
                for (const auto& f : c.failures)
                    std::cerr << f << "\n";
            sum.add(c);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "pairs " << sum.pairs << ", with rb paths " << sum.rb_pairs << ", rb paths " << sum.rb_paths
                  << ", " << secs << " s\n";
        for (int d = 0; d < 2; ++d) {
            const std::string n = d == 0 ? "syn" : "dp";
            print_summary_line(sum.rb_covered[d] == 0, n + " rb paths covered: " + std::to_string(sum.rb_covered[d]));
            print_summary_line(sum.graph_unsound[d] == 0,
                               n + " unsound graph traces: " + std::to_string(sum.graph_unsound[d]));
            print_summary_line(sum.graph_invalid[d] + sum.condition_invalid[d] == 0,
                               n + " malformed graphs/conditions: " +
                                   std::to_string(sum.graph_invalid[d] + sum.condition_invalid[d]));
            print_summary_line(sum.reducer_mismatch[d] == 0,
                               n + " reducer mismatches: " + std::to_string(sum.reducer_mismatch[d]));
            print_summary_line(sum.missed_alarms[d] == 0, n + " missed alarms: " + std::to_string(sum.missed_alarms[d]));
        }
        print_summary_line(sum.nondeterministic_dp == 0,
                           "dp label-nondeterministic graphs: " + std::to_string(sum.nondeterministic_dp));
        print_summary_line(sum.pop_bound_exceeded == 0, "dp pop bound exceeded: " + std::to_string(sum.pop_bound_exceeded));
        print_summary_line(sum.alignment_failures == 0,
                           "dp alignment witnesses missing: " + std::to_string(sum.alignment_failures) + " of " +
                               std::to_string(sum.alignment_checked + sum.alignment_failures));
        std::cout << "blocked oracle runs: " << sum.blocked_runs << "\n";
        std::cout << "explored paths: syn " << sum.explored[0] << ", dp " << sum.explored[1] << "\n";
        std::cout << "pairs where dp accepts and syn does not: " << sum.dp_accepts_syn_not << "\n";
        for (const auto& f : sum.failures)
            std::cout << "  " << f << "\n";
        exit_code = sum.failures.empty() ? 0 : 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}
