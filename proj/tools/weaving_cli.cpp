// Command-line front end: run stages, verify closed forms, emit logs,
// diagrams and reports.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "weaving/pipeline.hpp"

using namespace weaving;

namespace {

int check_genus(long long g) {
    if (g < 2) {
        std::cerr << "error: genus must be at least 2\n";
        return 2;
    }
    return 0;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << bytes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weaving: symbolic mutation engine for stable-pair decompositions"};
    app.require_subcommand(1);

    long long g = 5;
    std::string stage = "all";
    std::string mode = "theorem22";
    std::string emit_log, report_path, out_path;
    std::string data_path = "data/proof_instantiations.jsonl";
    bool with_dual = false;

    auto* run = app.add_subcommand("run", "run the mutation pipeline");
    run->add_option("--genus", g, "curve genus (>= 2)")->required();
    run->add_option("--stage", stage, "twill|crosswarp|loom|weave|all");
    run->add_option("--mode", mode, "theorem22|corollary28 (stage twill)");
    run->add_flag("--dual-sod", with_dual, "also replay the dual decomposition");
    run->add_option("--emit-log", emit_log, "write the event log (JSON lines)");
    run->add_option("--report", report_path, "write the final report (JSON)");

    auto* verify = app.add_subcommand("verify", "run every closed-form and certificate check");
    verify->add_option("--genus", g)->required();
    verify->add_option("--data", data_path, "proof-instantiation corpus file");
    verify->add_option("--report", report_path, "write the verification report (JSON)");

    auto* render = app.add_subcommand("render", "draw the weaving diagrams");
    render->add_option("--genus", g)->required();
    render->add_option("--stage", stage, "twill|crosswarp|loom|weave|all");
    render->add_option("--out", out_path, "output SVG file")->required();
    int width = 1200, height = 0;
    bool raw = false;
    render->add_option("--width", width, "pixel width");
    render->add_option("--height", height, "pixel height (0 = auto)");
    render->add_flag("--raw", raw, "raw crossing-plane coordinates");
    std::string layout_dump;
    render->add_option("--layout-json", layout_dump, "also dump the layout as JSON");

    auto* braid = app.add_subcommand("braid", "emit the braid word ofap full pipeline run");
    braid->add_option("--genus", g)->required();
    braid->add_option("--out", out_path, "output JSON file")->required();

    auto* oracle = app.add_subcommand("oracle", "independent brute-force checks");
    auto* crossings = oracle->add_subcommand("crossings", "pairwise trajectory-crossing count");
    crossings->add_option("--genus", g)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (int rc = check_genus(g)) return rc;
            auto st = stage_from_name(stage);
            if (!st) {
                std::cerr << "error: unknown stage " << stage << "\n";
                return 2;
            }
            TwillMode m;
            if (mode == "theorem22")
                m = TwillMode::Theorem;
            else if (mode == "corollary28")
                m = TwillMode::FullSweep;
            else {
                std::cerr << "error: unknown mode " << mode << "\n";
                return 2;
            }
            PipelineResult res = run_pipeline(g, {*st, m, with_dual});
            if (!emit_log.empty()) write_file(emit_log, res.combined_log().to_jsonl());
            nlohmann::json rep;
            rep["genus"] = g;
            rep["blocks"] = res.final_dec().size();
            if (res.weave) {
                rep["pulled_back"] = nlohmann::json::array();
                rep["residual_A"] = nlohmann::json::array();
                long long certified = 0, obligations = 0;
                for (const auto& b : res.final_dec().blocks) {
                    nlohmann::json jb = b;
                    if (b.tag == ResidueTag::PulledBack)
                        rep["pulled_back"].push_back(jb);
                    else
                        rep["residual_A"].push_back(jb);
                }
                for (const auto& e : res.combined_log().events)
                    for (const auto& c : e.certificates) {
                        if (c.status == CertStatus::External) continue;
                        ++obligations;
                        if (c.certified()) ++certified;
                    }
                rep["certificates"] = {{"emitted", obligations}, {"certified", certified}};
                rep["external_citations"] = res.dual ? res.dual->external : 0;
            }
            if (!report_path.empty())
                write_file(report_path, rep.dump(2) + "\n");
            else
                std::cout << rep.dump(2) << "\n";
            return 0;
        }
        if (verify->parsed()) {
            if (int rc = check_genus(g)) return rc;
            VerifyReport rep = verify_genus(g, data_path);
            nlohmann::json j = rep;
            if (!report_path.empty())
                write_file(report_path, j.dump(2) + "\n");
            std::cout << j.dump(2) << "\n";
            if (!rep.ok()) {
                std::cerr << "verification FAILED\n";
                return 1;
            }
            std::cout << "verification passed: " << rep.strands << " strands, "
                      << rep.pulled_back << " final blocks, " << rep.residual
                      << " residual blocks\n";
            return 0;
        }
        if (render->parsed()) {
            if (int rc = check_genus(g)) return rc;
            auto st = stage_from_name(stage);
            if (!st) {
                std::cerr << "error: unknown stage " << stage << "\n";
                return 2;
            }
            PipelineResult res = run_pipeline(g, {*st, TwillMode::Theorem, false});
            auto panels = pipeline_panels(res, !raw);
            RenderOptions opt;
            opt.width = width;
            opt.height = height;
            opt.figure_style = !raw;
            write_file(out_path, emit_svg(panels, opt));
            if (!layout_dump.empty())
                write_file(layout_dump, layout_json(panels).dump(2) + "\n");
            return 0;
        }
        if (braid->parsed()) {
            if (int rc = check_genus(g)) return rc;
            PipelineResult res = run_pipeline(g, {Stage::All, TwillMode::Theorem, false});
            nlohmann::json j = braid_word(res.combined_log());
            write_file(out_path, j.dump(2) + "\n");
            return 0;
        }
        if (crossings->parsed()) {
            if (int rc = check_genus(g)) return rc;
            std::cout << oracle_crossing_count(g) << "\n";
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
