#pragma once

#include <optional>
#include <string>

#include "weaving/corpus.hpp"
#include "weaving/crosswarp.hpp"
#include "weaving/loom.hpp"
#include "weaving/render.hpp"
#include "weaving/twill.hpp"
#include "weaving/weave.hpp"

namespace weaving {

enum class Stage { Twill, CrossWarp, Loom, Weave, All };

inline std::optional<Stage> stage_from_name(const std::string& s) {
    if (s == "twill") return Stage::Twill;
    if (s == "crosswarp") return Stage::CrossWarp;
    if (s == "loom") return Stage::Loom;
    if (s == "weave") return Stage::Weave;
    if (s == "all") return Stage::All;
    return std::nullopt;
}

struct PipelineOptions {
    Stage stage = Stage::All;
    TwillMode mode = TwillMode::Theorem;
    bool with_dual = false;
};

struct PipelineResult {
    long long g = 2;
    TwillResult twill;
    Decomposition warp_start, loom_start, weave_start;
    std::optional<CrossWarpResult> warp;
    std::optional<LoomResult> loom;
    std::optional<WeaveResult> weave;
    std::optional<DualSodResult> dual;

    const Decomposition& final_dec() const {
        if (weave) return weave->dec;
        if (loom) return loom->dec;
        if (warp) return warp->dec;
        return twill.dec;
    }

    EventLog combined_log() const {
        EventLog log;
        for (const auto& e : twill.log.events) log.push(e);
        if (warp)
            for (const auto& e : warp->log.events) log.push(e);
        if (loom)
            for (const auto& e : loom->log.events) log.push(e);
        if (weave)
            for (const auto& e : weave->log.events) log.push(e);
        if (dual)
            for (const auto& e : dual->log.events) log.push(e);
        return log;
    }
};

inline PipelineResult run_pipeline(long long g, PipelineOptions opt = {}) {
    if (g < 2) throw std::domain_error("run_pipeline: genus must be >= 2");
    PipelineResult res;
    res.g = g;
    if (opt.stage == Stage::Twill) {
        res.twill = twill_run(g, opt.mode);
        return res;
    }
    res.twill = twill_run(g, TwillMode::Theorem);
    res.warp_start = res.twill.dec;
    res.warp = cross_warp_run(res.twill.dec, g);
    if (opt.stage == Stage::CrossWarp) return res;
    res.loom_start = res.warp->dec;
    res.loom = loom_run(res.warp->dec, g);
    if (opt.stage == Stage::Loom) return res;
    res.weave_start = res.loom->dec;
    res.weave = weave_run(res.loom->dec, g, res.loom->coords);
    if (opt.with_dual) res.dual = dual_sod(g);
    return res;
}

inline std::vector<RenderPanel> pipeline_panels(const PipelineResult& res,
                                                bool figure_style = true) {
    std::vector<RenderPanel> panels;
    panels.push_back(twill_panel(res.g, res.twill.log, figure_style));
    if (res.warp) panels.push_back(lane_panel("crosswarp", res.warp_start, res.warp->log));
    if (res.loom) panels.push_back(lane_panel("loom", res.loom_start, res.loom->log));
    if (res.weave) panels.push_back(lane_panel("weave", res.weave_start, res.weave->log));
    return panels;
}

// ---------------------------------------------------------------------------
// Verification battery
// ---------------------------------------------------------------------------

struct VerifyReport {
    long long g = 2;
    bool strand_count_ok = false;
    bool theorem_list_ok = false;
    bool full_sweep_ok = false;
    bool cross_warp_ok = false;
    bool loom_ok = false;
    bool weave_ok = false;
    bool braid_matches_oracle = false;
    long long strands = 0;
    long long braid_length = 0;
    long long oracle_count = 0;
    long long obligations = 0;
    long long certified = 0;
    long long pulled_back = 0;
    long long residual = 0;
    long long corpus_expanded = 0;
    long long corpus_certified = 0;
    long long dual_external = 0;
    std::string error;

    bool ok() const {
        return strand_count_ok && theorem_list_ok && full_sweep_ok && cross_warp_ok &&
               loom_ok && weave_ok && braid_matches_oracle && obligations == certified &&
               corpus_expanded == corpus_certified && error.empty();
    }
};

inline void to_json(nlohmann::json& j, const VerifyReport& r) {
    j = nlohmann::json{{"g", r.g},
                       {"strands", r.strands},
                       {"strand_count_ok", r.strand_count_ok},
                       {"theorem_list_ok", r.theorem_list_ok},
                       {"full_sweep_ok", r.full_sweep_ok},
                       {"cross_warp_ok", r.cross_warp_ok},
                       {"loom_ok", r.loom_ok},
                       {"weave_ok", r.weave_ok},
                       {"braid_length", r.braid_length},
                       {"oracle_count", r.oracle_count},
                       {"braid_matches_oracle", r.braid_matches_oracle},
                       {"obligations", r.obligations},
                       {"certified", r.certified},
                       {"pulled_back", r.pulled_back},
                       {"residual", r.residual},
                       {"corpus_expanded", r.corpus_expanded},
                       {"corpus_certified", r.corpus_certified},
                       {"dual_external_citations", r.dual_external}};
    if (!r.error.empty()) j["error"] = r.error;
}

inline VerifyReport verify_genus(long long g, const std::string& corpus_path = {}) {
    VerifyReport r;
    r.g = g;
    try {
        Decomposition census = twill_census(g);
        r.strands = (long long)census.size();
        r.strand_count_ok = r.strands == strand_count(g);
        std::map<long long, long long> per_k;
        for (const auto& b : census.blocks) per_k[b.source_degree]++;
        for (long long k = 0; k <= g - 1; ++k)
            if (per_k[k] != 3 * g - 2 - 3 * k) r.strand_count_ok = false;

        PipelineResult pipe = run_pipeline(g, {Stage::All, TwillMode::Theorem, true});
        r.theorem_list_ok = diff(pipe.twill.dec, twill_stopped_list(g)).empty();
        r.cross_warp_ok = diff(pipe.warp->dec, cross_warp_list(g)).empty();
        r.loom_ok = diff(pipe.loom->dec, four_mega_list(g)).empty();
        r.weave_ok = pipe.weave->report.pulled_back == 2 * g - 1 &&
                     pipe.weave->report.residual == strand_count(g) - (2 * g - 1);
        r.pulled_back = pipe.weave->report.pulled_back;
        r.residual = pipe.weave->report.residual;
        r.dual_external = pipe.dual ? pipe.dual->external : 0;

        TwillResult sweep = twill_run(g, TwillMode::FullSweep);
        r.full_sweep_ok = diff(sweep.dec, twill_full_list(g)).empty();
        r.braid_length = (long long)braid_word(sweep.log).size();
        r.oracle_count = oracle_crossing_count(g);
        r.braid_matches_oracle = r.braid_length == r.oracle_count;

        auto tally = [&](const EventLog& log) {
            for (const auto& e : log.events)
                for (const auto& c : e.certificates) {
                    if (c.status == CertStatus::External) continue;
                    ++r.obligations;
                    if (c.certified()) ++r.certified;
                }
        };
        tally(pipe.twill.log);
        tally(pipe.warp->log);
        tally(pipe.loom->log);
        tally(pipe.weave->log);
        tally(sweep.log);

        if (!corpus_path.empty()) {
            auto entries = load_corpus_file(corpus_path);
            CorpusStats st = replay_corpus(entries, g);
            r.corpus_expanded = st.expanded;
            r.corpus_certified = st.certified;
        }
    } catch (const std::exception& ex) {
        r.error = ex.what();
    }
    return r;
}

}  // namespace weaving
