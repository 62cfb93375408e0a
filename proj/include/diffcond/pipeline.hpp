// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffcond/campaign.hpp"
#include "diffcond/condition.hpp"
#include "diffcond/condverify.hpp"
#include "diffcond/difference_graph.hpp"
#include "diffcond/reducer.hpp"

namespace diffcond {

struct PipelineOptions {
    Detector detector = Detector::dp;
    DetectorConfig config;
    OracleBounds bounds; // empty input_vars: variables read before written
    bool reduce = false;
    bool baseline = false;
    std::string out_dir; // artifacts are written here when nonempty
};

struct StageTiming {
    std::string stage;
    double wall_ms = 0;
    double cpu_ms = 0;
};

struct PipelineReport {
    Detector detector = Detector::dp;
    std::optional<Cfa> original;
    std::optional<Cfa> modified;
    DifferenceGraph graph;
    Condition condition;
    std::optional<ResidualCfa> residual;
    Verdict conditional;
    std::optional<Verdict> baseline;
    std::vector<StageTiming> timings;

    nlohmann::json to_json(bool with_timings = true) const;
};

/// Error raised by a pipeline stage; what() is prefixed with the stage name.
class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& message);
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

PipelineReport run_pipeline(const std::string& original_src, const std::string& modified_src,
                            const PipelineOptions& options);

} // namespace diffcond
