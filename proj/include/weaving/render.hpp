#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "weaving/event.hpp"
#include "weaving/twill.hpp"

namespace weaving {

struct RenderOptions {
    int width = 1200;
    int height = 0;  // 0: derived from content
    bool figure_style = true;
};

struct RenderCrossing {
    double x = 0, y = 0;
    int over = 0, under = 0;
};

struct StrandPath {
    int id = 0;
    int color_key = 0;  // source degree
    std::vector<std::pair<double, double>> pts;
};

struct RenderPanel {
    std::string name;
    std::vector<StrandPath> strands;
    std::vector<RenderCrossing> crossings;
    double wu = 1, hu = 1;  // extent in layout units
};

namespace render_detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Palette keyed by source degree; fixed, so the output is byte-stable.
inline std::string color(int key) {
    static const char* palette[] = {"#1f3a5f", "#8a2d2d", "#2d6a4f", "#8a6d1a",
                                    "#5a3d8a", "#20636b", "#7a4b12", "#3b3b3b"};
    return palette[key % 8];
}

}  // namespace render_detail

// The display map for the crossing plane: a projective squash keeping the
// crossing order while pulling the birth verticals in from infinity.
inline double display_x(double x, bool figure_style) {
    if (!figure_style) return x;
    return 8.0 * x / (x + 5.0);
}

// Trajectory panel of the stage-1 sweep: one polyline per strand sampled at
// its crossing times with hyperbola interpolation in between, the modified
// horizontal paths of the degree-level strands, and one marker per braid
// letter.
inline RenderPanel twill_panel(long long g, const EventLog& log, bool figure_style) {
    RenderPanel panel;
    panel.name = "twill";
    std::map<int, Strand> strands;
    for (const auto& st : twill_strands(g)) strands[st.id] = st;

    // participation times per strand
    std::map<int, std::vector<Rat>> times;
    for (const auto& e : log.events) {
        if (e.kind != EventKind::Permute && e.kind != EventKind::ChainMutation) continue;
        for (int id : e.pre_ids) times[id].push_back(e.time);
    }
    double t_end = (double)g - 0.04;
    for (const auto& [id, st] : strands) {
        StrandPath path;
        path.id = id;
        path.color_key = (int)st.k;
        auto push = [&](double t, double x) {
            path.pts.emplace_back(display_x(x, figure_style), t);
        };
        if (st.s == 0) {
            // horizontal entry at its own level, then the vertical tail
            push((double)st.k, display_x(3.6 * g, false) /* far right, raw */);
            path.pts.back().first = figure_style ? 8.0 : 3.6 * g;
            push((double)st.k, 0.02 * (double)(st.k + 1));
            push(t_end, 0.02 * (double)(st.k + 1));
            panel.strands.push_back(std::move(path));
            continue;
        }
        std::vector<double> ts;
        double birth = (double)st.k + 0.5 / (double)g;
        ts.push_back(birth);
        auto it = times.find(id);
        Rat last_event = Rat(0);
        if (it != times.end())
            for (const Rat& t : it->second) {
                ts.push_back(t.to_double());
                if (last_event < t) last_event = t;
            }
        ts.push_back(t_end);
        std::sort(ts.begin(), ts.end());
        for (std::size_t u = 0; u + 1 < ts.size(); ++u) {
            double a = ts[u], b = ts[u + 1];
            for (int q = 0; q < 6; ++q) {
                double t = a + (b - a) * q / 6.0;
                if (t <= st.k) continue;
                push(t, (double)st.s / (t - (double)st.k));
            }
        }
        push(t_end, (double)st.s / (t_end - (double)st.k));
        panel.strands.push_back(std::move(path));
    }

    auto letters = braid_word(log);
    for (const auto& l : letters) {
        const Event& e = log.events[(std::size_t)l.event_seq];
        if (e.kind == EventKind::WindowsEmbed) continue;
        RenderCrossing c;
        c.over = l.over_id;
        c.under = l.under_id;
        double x = 0;
        bool found = false;
        if (e.kind == EventKind::Reorder) {
            c.y = (double)g + 0.3;
            c.x = display_x(0.4 * (double)(l.position % 24), figure_style);
        } else {
            for (int id : e.pre_ids) {
                const Strand& st = strands[id];
                if (st.s > 0 && e.time > Rat(st.k)) {
                    x = trajectory(st.k, st.s, e.time).to_double();
                    found = true;
                    break;
                }
            }
            c.x = display_x(found ? x : 0.0, figure_style);
            c.y = e.time.to_double();
        }
        panel.crossings.push_back(c);
    }
    panel.wu = figure_style ? 8.4 : 3.6 * g + 0.5;
    panel.hu = (double)g + 0.8;
    return panel;
}

// Position-lane panel for the later stages: strands sit in list lanes and
// jump at their events, one step per event.
inline RenderPanel lane_panel(const std::string& name, const Decomposition& start,
                              const EventLog& log) {
    RenderPanel panel;
    panel.name = name;
    std::vector<int> order;
    for (const auto& b : start.blocks) order.push_back(b.id);
    std::map<int, std::vector<std::pair<double, double>>> paths;
    std::map<int, int> color;
    for (const auto& b : start.blocks) color[b.id] = b.source_degree;
    double step = 0;
    auto snapshot = [&]() {
        for (std::size_t p = 0; p < order.size(); ++p)
            paths[order[p]].emplace_back((double)p, step);
    };
    snapshot();
    for (const auto& e : log.events) {
        // apply the span permutation to the order vector
        if (!e.pre_ids.empty()) {
            std::vector<BraidLetter> letters;
            braid_letters_of(e, letters);
            for (const auto& l : letters) {
                RenderCrossing c;
                c.x = (double)l.position;
                c.y = step + 0.5;
                c.over = l.over_id;
                c.under = l.under_id;
                panel.crossings.push_back(c);
            }
            for (std::size_t u = 0; u < e.pre_ids.size(); ++u)
                order[e.span_begin + u] = e.post_ids[u];
        }
        for (const auto& nb : e.appended) {
            order.push_back(nb.id);
            color[nb.id] = nb.source_degree;
        }
        step += 1;
        snapshot();
    }
    for (auto& [id, pts] : paths) {
        StrandPath sp;
        sp.id = id;
        sp.color_key = color.count(id) ? color[id] : 0;
        sp.pts = pts;
        panel.strands.push_back(std::move(sp));
    }
    panel.wu = (double)order.size() + 1;
    panel.hu = step + 1;
    return panel;
}

inline nlohmann::json layout_json(const std::vector<RenderPanel>& panels) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : panels) {
        nlohmann::json jp;
        jp["name"] = p.name;
        jp["strands"] = nlohmann::json::array();
        for (const auto& s : p.strands) {
            nlohmann::json js;
            js["id"] = s.id;
            js["pts"] = nlohmann::json::array();
            for (auto [x, y] : s.pts)
                js["pts"].push_back({render_detail::fmt(x), render_detail::fmt(y)});
            jp["strands"].push_back(js);
        }
        jp["crossings"] = nlohmann::json::array();
        for (const auto& c : p.crossings)
            jp["crossings"].push_back({{"x", render_detail::fmt(c.x)},
                                       {"y", render_detail::fmt(c.y)},
                                       {"over", c.over},
                                       {"under", c.under}});
        out.push_back(jp);
    }
    return out;
}

// Standalone SVG, byte-deterministic for fixed inputs. Crossings draw a
// small mask disk and then the over-strand tick, so the under-strand
// visually breaks.
inline std::string emit_svg(const std::vector<RenderPanel>& panels, RenderOptions opt = {}) {
    using render_detail::color;
    using render_detail::fmt;
    double pad = 24;
    double width = (double)opt.width;
    double total_h = 0;
    std::vector<double> scale, oy;
    for (const auto& p : panels) {
        double s = (width - 2 * pad) / p.wu;
        scale.push_back(s);
        oy.push_back(total_h);
        total_h += p.hu * s * 0.6 + 3 * pad;
    }
    if (opt.height > 0) total_h = (double)opt.height;
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
           "\" height=\"" + fmt(total_h) + "\" viewBox=\"0 0 " + fmt(width) + " " +
           fmt(total_h) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#fdfcf8\"/>\n";
    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const auto& p = panels[pi];
        double s = scale[pi], sy = s * 0.6;
        auto X = [&](double x) { return pad + x * s; };
        auto Y = [&](double y) { return oy[pi] + 2 * pad + y * sy; };
        out += "<text x=\"" + fmt(pad) + "\" y=\"" + fmt(oy[pi] + pad) +
               "\" font-family=\"monospace\" font-size=\"14\" fill=\"#333\">" + p.name +
               "</text>\n";
        for (const auto& st : p.strands) {
            if (st.pts.size() < 2) continue;
            std::string d = "M";
            for (std::size_t u = 0; u < st.pts.size(); ++u) {
                d += fmt(X(st.pts[u].first)) + "," + fmt(Y(st.pts[u].second));
                if (u + 1 < st.pts.size()) d += " L";
            }
            out += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + color(st.color_key) +
                   "\" stroke-width=\"1.2\"/>\n";
        }
        for (const auto& c : p.crossings) {
            out += "<circle cx=\"" + fmt(X(c.x)) + "\" cy=\"" + fmt(Y(c.y)) +
                   "\" r=\"3.0\" fill=\"#fdfcf8\" stroke=\"none\"/>\n";
            out += "<circle cx=\"" + fmt(X(c.x)) + "\" cy=\"" + fmt(Y(c.y)) +
                   "\" r=\"1.2\" fill=\"#333\" stroke=\"none\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace weaving
