#ifndef SPECCURVE_PIPELINE_HPP
#define SPECCURVE_PIPELINE_HPP

// Batch front end: JSON config in, JSON report out. All scalars travel as
// exact strings ("p/q" with an optional "i" part); reports are deterministic
// given (config, seed). Logs never go into the report.

#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "speccurve/expr.hpp"
#include "speccurve/lattice.hpp"
#include "speccurve/prng.hpp"

namespace speccurve {

using ordered_json = nlohmann::ordered_json;

// ------------------------------------------------------------- config ------

struct VaryEntry {
    std::string kind;  // "jet" | "residue" | "location"
    int point = 0;
    int basis = 0;  // jet: basis index
    int level = 0;  // jet: 0-based index into (zeta^m ... zeta^1)
    int row = 0, col = 0;  // residue entry
};

struct SweepSpec {
    std::vector<VaryEntry> vary;
    std::vector<GaussRat> grid;
    int samples = 0;
    std::optional<int> balance_point;
    std::optional<std::uint64_t> seed;
};

struct RunConfig {
    int rank = 0;
    bool has_higgs = false;
    std::vector<SingularPoint> higgs_points;
    std::optional<RMat> tail;
    std::optional<SpectralData> spectral;
    std::vector<ParabolicFlag> flags;
    std::optional<SweepSpec> sweep;
    long long delta = 0;
};

namespace detail_io {

inline GaussRat scalar(const nlohmann::json& j, const std::string& what) {
    if (!j.is_string()) throw parse_error(what + ": scalars must be exact strings");
    return parse_gauss(j.get<std::string>());
}

inline GaussRat location_pair(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw parse_error("location must be a pair of rational strings [re, im]");
    Rat re = parse_rat(j[0].get<std::string>());
    Rat im = parse_rat(j[1].get<std::string>());
    return GaussRat(re, im);
}

inline QMat matrix(const nlohmann::json& j, std::size_t rows, std::size_t cols,
                   const std::string& what) {
    if (!j.is_array() || j.size() != rows) throw parse_error(what + ": expected " +
                                                             std::to_string(rows) + " rows");
    QMat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw parse_error(what + ": row " + std::to_string(i) + " must have " +
                              std::to_string(cols) + " entries");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = scalar(j[i][k], what);
    }
    return m;
}

inline ordered_json matrix_json(const QMat& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(gauss_to_string(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

} // namespace detail_io

inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig cfg;
    if (!j.is_object()) throw parse_error("config must be a JSON object");
    if (!j.contains("schema_version") || j["schema_version"].get<std::string>() != "1")
        throw parse_error("config needs schema_version \"1\"");
    if (!j.contains("rank")) throw parse_error("config needs a rank");
    cfg.rank = j["rank"].get<int>();
    if (cfg.rank < 2) throw parse_error("rank must be at least 2");
    std::size_t r = static_cast<std::size_t>(cfg.rank);

    bool has_higgs = j.contains("higgs"), has_spectral = j.contains("spectral");
    if (has_higgs == has_spectral)
        throw parse_error("config must contain exactly one of \"higgs\" or \"spectral\"");

    if (has_higgs) {
        cfg.has_higgs = true;
        const auto& h = j["higgs"];
        if (!h.contains("points") || !h["points"].is_array() || h["points"].empty())
            throw parse_error("higgs.points must be a nonempty array");
        for (const auto& pj : h["points"]) {
            SingularPoint pt;
            pt.location = detail_io::location_pair(pj.at("location"));
            pt.order = pj.at("order").get<int>();
            if (pt.order < 0) throw parse_error("point order must be nonnegative");
            NormalForm nf;
            nf.frame = pj.contains("frame") ? detail_io::matrix(pj["frame"], r, r, "frame")
                                            : QMat::identity(r);
            const auto& jets = pj.at("jets");
            if (!jets.is_array() || jets.size() != r)
                throw parse_error("jets must have one row per basis index");
            nf.jets.resize(r);
            for (std::size_t b = 0; b < r; ++b) {
                if (!jets[b].is_array() || jets[b].size() != static_cast<std::size_t>(pt.order))
                    throw parse_error("each jet row must list (zeta^m ... zeta^1), m entries");
                for (const auto& v : jets[b]) nf.jets[b].push_back(detail_io::scalar(v, "jets"));
            }
            nf.residue = detail_io::matrix(pj.at("residue"), r, r, "residue");
            pt.normal_form = std::move(nf);
            cfg.higgs_points.push_back(std::move(pt));
        }
        if (h.contains("tail")) {
            RMat tail(r, r);
            const auto& tj = h["tail"];
            if (!tj.is_array() || tj.size() != r) throw parse_error("tail must be an r x r matrix");
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t k = 0; k < r; ++k) {
                    RatFunc f = parse_ratfunc(tj[i][k].get<std::string>());
                    if (!f.is_polynomial())
                        throw parse_error("tail entries must be polynomials in z");
                    tail(i, k) = f;
                }
            cfg.tail = std::move(tail);
        }
    } else {
        const auto& sj = j["spectral"];
        SpectralData S;
        S.rank = cfg.rank;
        const auto& coeffs = sj.at("coefficients");
        if (!coeffs.is_array() || coeffs.size() != r)
            throw parse_error("spectral.coefficients must list a_1..a_r");
        for (const auto& c : coeffs) S.a.push_back(parse_ratfunc(c.get<std::string>()));
        for (const auto& pj : sj.at("points")) {
            DivisorPoint dp;
            dp.location = detail_io::location_pair(pj.at("location"));
            dp.order = pj.at("order").get<int>();
            S.points.push_back(dp);
        }
        cfg.spectral = std::move(S);
    }

    if (j.contains("flags")) {
        for (const auto& fj : j["flags"]) {
            ParabolicFlag flag;
            flag.point_index = fj.at("point").get<int>();
            for (const auto& wj : fj.at("weights")) flag.weights.push_back(parse_rat(wj.get<std::string>()));
            for (const auto& stj : fj.at("steps")) {
                if (!stj.is_array() || stj.empty()) throw parse_error("flag step needs spanning vectors");
                QMat step(r, stj.size());
                for (std::size_t v = 0; v < stj.size(); ++v)
                    for (std::size_t i = 0; i < r; ++i)
                        step(i, v) = detail_io::scalar(stj[v][i], "flag step");
                flag.steps.push_back(std::move(step));
            }
            cfg.flags.push_back(std::move(flag));
        }
    }

    if (j.contains("delta")) cfg.delta = std::stoll(j["delta"].get<std::string>());

    if (j.contains("sweep")) {
        SweepSpec sw;
        const auto& swj = j["sweep"];
        for (const auto& vj : swj.at("vary")) {
            VaryEntry v;
            v.kind = vj.at("kind").get<std::string>();
            v.point = vj.at("point").get<int>();
            if (v.kind == "jet") {
                v.basis = vj.at("basis").get<int>();
                v.level = vj.at("level").get<int>();
            } else if (v.kind == "residue") {
                v.row = vj.at("row").get<int>();
                v.col = vj.at("col").get<int>();
            } else if (v.kind != "location") {
                throw parse_error("vary.kind must be jet, residue, or location");
            }
            sw.vary.push_back(v);
        }
        for (const auto& gj : swj.at("grid")) sw.grid.push_back(detail_io::scalar(gj, "grid"));
        if (sw.grid.empty()) throw parse_error("sweep.grid must be nonempty");
        sw.samples = swj.at("samples").get<int>();
        if (swj.contains("balance_point")) sw.balance_point = swj["balance_point"].get<int>();
        if (swj.contains("seed")) sw.seed = swj["seed"].get<std::uint64_t>();
        cfg.sweep = std::move(sw);
    }
    return cfg;
}

// Canonical, re-runnable echo of the parsed configuration.
inline ordered_json canonical_echo(const RunConfig& cfg) {
    ordered_json e;
    e["schema_version"] = "1";
    e["rank"] = cfg.rank;
    if (cfg.has_higgs) {
        ordered_json pts = ordered_json::array();
        for (const auto& pt : cfg.higgs_points) {
            const auto& nf = pt.normal_form.value();
            ordered_json pj;
            pj["location"] = {rat_to_string(pt.location.re), rat_to_string(pt.location.im)};
            pj["order"] = pt.order;
            pj["frame"] = detail_io::matrix_json(nf.frame);
            ordered_json jets = ordered_json::array();
            for (const auto& row : nf.jets) {
                ordered_json jr = ordered_json::array();
                for (const auto& v : row) jr.push_back(gauss_to_string(v));
                jets.push_back(jr);
            }
            pj["jets"] = jets;
            pj["residue"] = detail_io::matrix_json(nf.residue);
            pts.push_back(pj);
        }
        e["higgs"]["points"] = pts;
        if (cfg.tail) {
            ordered_json tj = ordered_json::array();
            for (std::size_t i = 0; i < cfg.tail->rows(); ++i) {
                ordered_json row = ordered_json::array();
                for (std::size_t k = 0; k < cfg.tail->cols(); ++k)
                    row.push_back((*cfg.tail)(i, k).str("z"));
                tj.push_back(row);
            }
            e["higgs"]["tail"] = tj;
        }
    } else {
        ordered_json sj;
        ordered_json coeffs = ordered_json::array();
        for (const auto& a : cfg.spectral->a) coeffs.push_back(a.str("z"));
        sj["coefficients"] = coeffs;
        ordered_json pts = ordered_json::array();
        for (const auto& pt : cfg.spectral->points) {
            ordered_json pj;
            pj["location"] = {rat_to_string(pt.location.re), rat_to_string(pt.location.im)};
            pj["order"] = pt.order;
            pts.push_back(pj);
        }
        sj["points"] = pts;
        e["spectral"] = sj;
    }
    if (!cfg.flags.empty()) {
        ordered_json fl = ordered_json::array();
        for (const auto& f : cfg.flags) {
            ordered_json fj;
            fj["point"] = f.point_index;
            ordered_json ws = ordered_json::array();
            for (const auto& w : f.weights) ws.push_back(rat_to_string(w));
            fj["weights"] = ws;
            ordered_json steps = ordered_json::array();
            for (const auto& st : f.steps) {
                ordered_json vecs = ordered_json::array();
                for (std::size_t v = 0; v < st.cols(); ++v) {
                    ordered_json vec = ordered_json::array();
                    for (std::size_t i = 0; i < st.rows(); ++i) vec.push_back(gauss_to_string(st(i, v)));
                    vecs.push_back(vec);
                }
                steps.push_back(vecs);
            }
            fj["steps"] = steps;
            fl.push_back(fj);
        }
        e["flags"] = fl;
    }
    if (cfg.delta != 0) e["delta"] = std::to_string(cfg.delta);
    if (cfg.sweep) {
        ordered_json swj;
        ordered_json vary = ordered_json::array();
        for (const auto& v : cfg.sweep->vary) {
            ordered_json vj;
            vj["kind"] = v.kind;
            vj["point"] = v.point;
            if (v.kind == "jet") {
                vj["basis"] = v.basis;
                vj["level"] = v.level;
            } else if (v.kind == "residue") {
                vj["row"] = v.row;
                vj["col"] = v.col;
            }
            vary.push_back(vj);
        }
        swj["vary"] = vary;
        ordered_json grid = ordered_json::array();
        for (const auto& g : cfg.sweep->grid) grid.push_back(gauss_to_string(g));
        swj["grid"] = grid;
        swj["samples"] = cfg.sweep->samples;
        if (cfg.sweep->balance_point) swj["balance_point"] = *cfg.sweep->balance_point;
        if (cfg.sweep->seed) swj["seed"] = *cfg.sweep->seed;
        e["sweep"] = swj;
    }
    return e;
}

// ------------------------------------------------------- report pieces -----

namespace detail_io {

inline ordered_json validation_json(const ValidationReport& rep) {
    ordered_json out;
    out["ok"] = rep.ok;
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["location"] = c.location;
        cj["ok"] = c.ok;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        checks.push_back(cj);
    }
    out["checks"] = checks;
    return out;
}

inline ordered_json casimir_node_json(const CasimirNode& n) {
    ordered_json nj;
    nj["label"] = gauss_to_string(n.label);
    nj["level"] = n.level;
    nj["d"] = n.d;
    if (n.leaf) {
        ordered_json lj;
        lj["poly"] = n.leaf->poly.str("w");
        lj["d"] = n.leaf->d;
        lj["ramified"] = n.leaf->ramified;
        lj["degree_mismatch"] = n.leaf->degree_mismatch;
        nj["leaf"] = lj;
    }
    if (!n.children.empty()) {
        ordered_json ch = ordered_json::array();
        for (const auto& c : n.children) ch.push_back(casimir_node_json(c));
        nj["children"] = ch;
    }
    return nj;
}

inline ordered_json casimir_json(const CasimirData& cd) {
    ordered_json out;
    out["retries"] = cd.retries;
    ordered_json pts = ordered_json::array();
    for (const auto& t : cd.points) {
        ordered_json tj;
        tj["point"] = t.point_index;
        tj["location"] = gauss_to_string(t.location);
        tj["order"] = t.order_m;
        tj["d_total"] = t.d_total;
        if (t.root_leaf) {
            ordered_json lj;
            lj["poly"] = t.root_leaf->poly.str("w");
            lj["d"] = t.root_leaf->d;
            lj["ramified"] = t.root_leaf->ramified;
            lj["degree_mismatch"] = t.root_leaf->degree_mismatch;
            tj["leaf"] = lj;
        }
        ordered_json nodes = ordered_json::array();
        for (const auto& n : t.roots) nodes.push_back(casimir_node_json(n));
        tj["tree"] = nodes;
        ordered_json brs = ordered_json::array();
        for (const auto& b : t.branches) {
            ordered_json bj;
            bj["expansion"] = b.expansion.str("z");
            bj["ramification"] = b.ramification;
            bj["count"] = b.count;
            if (b.tail) bj["tail_min_poly"] = b.tail->second.str("t");
            brs.push_back(bj);
        }
        tj["branches"] = brs;
        pts.push_back(tj);
    }
    out["points"] = pts;
    return out;
}

inline ordered_json tower_node_json(const BlowupNode& n) {
    ordered_json nj;
    nj["id"] = n.exceptional_id + ")";
    nj["center"] = gauss_to_string(n.center);
    ordered_json jet = ordered_json::array();
    for (const auto& c : n.chart_jet) jet.push_back(gauss_to_string(c));
    nj["chart_jet"] = jet;
    nj["level"] = n.level;
    nj["d"] = n.d;
    nj["mult"] = n.mult;
    nj["mult_anomaly"] = n.mult_anomaly;
    nj["center_on_curve"] = n.center_on_curve;
    nj["meets_e_infinity"] = n.meets_e_infinity;
    nj["proper"] = n.proper.str("z", "w");
    if (!n.children.empty()) {
        ordered_json ch = ordered_json::array();
        for (const auto& c : n.children) ch.push_back(tower_node_json(c));
        nj["children"] = ch;
    }
    return nj;
}

inline ordered_json tower_json(const BlowupTower& T) {
    ordered_json out;
    out["total_nodes"] = T.total_nodes;
    ordered_json pts = ordered_json::array();
    for (const auto& pt : T.points) {
        ordered_json pj;
        pj["point"] = pt.point_index;
        pj["location"] = gauss_to_string(pt.location);
        pj["order"] = pt.order_m;
        pj["chart"] = pt.chart.Q.str("z", "w");
        ordered_json nodes = ordered_json::array();
        for (const auto& n : pt.roots) nodes.push_back(tower_node_json(n));
        pj["nodes"] = nodes;
        pts.push_back(pj);
    }
    out["points"] = pts;
    return out;
}

inline ordered_json conditions_json(const ConditionReport& rep) {
    ordered_json out;
    out["all_pass"] = rep.all_pass;
    ordered_json res = ordered_json::array();
    for (const auto& r : rep.results) {
        ordered_json rj;
        rj["id"] = r.id;
        rj["pass"] = r.pass;
        rj["detail"] = r.detail;
        res.push_back(rj);
    }
    out["results"] = res;
    switch (rep.irreducibility.absolute) {
        case AbsoluteVerdict::Certified: out["absolute_irreducibility"] = "Certified"; break;
        case AbsoluteVerdict::Undetermined: out["absolute_irreducibility"] = "Undetermined"; break;
        case AbsoluteVerdict::NotApplicable: out["absolute_irreducibility"] = "NotApplicable"; break;
    }
    out["irreducibility_witness"] = rep.irreducibility.witness;
    return out;
}

inline ordered_json class_json(const DivisorClass& c) {
    ordered_json out = ordered_json::array();
    for (long long x : c) out.push_back(std::to_string(x));
    return out;
}

} // namespace detail_io

// --------------------------------------------------------- smoothness ------

struct SmoothnessReport {
    bool smooth = true;
    std::vector<std::string> witnesses;
};

// Smoothness of the blown-up proper transform: the affine curve away from
// the declared fibers, the fiber at infinity, and each leaf chart.
inline SmoothnessReport check_smoothness(const SpectralData& S, const BlowupTower& T) {
    SmoothnessReport rep;
    auto is_declared = [&](const GaussRat& z0) {
        for (const auto& pt : S.points)
            if (pt.location == z0) return true;
        return false;
    };

    ChartCurve global{cleared_global_form(S), -1, 0, "global", "cleared global form"};
    SingularLocus affine = singular_points(global);
    for (const auto& sol : affine.exact)
        if (!is_declared(sol.z0)) {
            rep.smooth = false;
            rep.witnesses.push_back("singular at (z, zeta-cleared) = (" + gauss_to_string(sol.z0) +
                                    ", " + gauss_to_string(sol.w0) + ")");
        }
    for (const auto& tri : affine.triangular) {
        if (tri.h.deg() == 1 && is_declared(-tri.h[0])) continue;  // resolved upstairs
        rep.smooth = false;
        rep.witnesses.push_back("singular locus over h(z) = " + tri.h.str("z"));
    }

    ChartCurve inf{infinity_chart(S), -1, 0, "infinity", "chart at z = infinity"};
    SingularLocus at_inf = singular_points(inf);
    for (const auto& sol : at_inf.exact)
        if (sol.z0.is_zero()) {
            rep.smooth = false;
            rep.witnesses.push_back("singular over z = infinity");
        }

    // regular declared points keep their own chart (no blow-ups there)
    for (std::size_t i = 0; i < S.points.size(); ++i) {
        if (S.points[i].order != 0) continue;
        SingularLocus loc = singular_points(to_chart(S, i));
        for (const auto& sol : loc.exact)
            if (sol.z0.is_zero()) {
                rep.smooth = false;
                rep.witnesses.push_back("singular over z=" + gauss_to_string(S.points[i].location) +
                                        " at zeta_i=" + gauss_to_string(sol.w0));
            }
        for (const auto& tri : loc.triangular)
            if (tri.h.eval(GaussRat(0)).is_zero()) {
                rep.smooth = false;
                rep.witnesses.push_back("singular over z=" + gauss_to_string(S.points[i].location) +
                                        " at an irrational point");
            }
    }

    for (const auto& pt : T.points)
        detail_blowup::walk(pt.roots, [&](const BlowupNode& n, bool is_leaf) {
            if (!is_leaf) return;
            ChartCurve leaf{n.proper, pt.point_index, 0, n.exceptional_id + ")", "leaf chart"};
            SingularLocus loc = singular_points(leaf);
            for (const auto& sol : loc.exact)
                if (sol.z0.is_zero()) {
                    rep.smooth = false;
                    rep.witnesses.push_back("singular on " + n.exceptional_id + ") at w=" +
                                            gauss_to_string(sol.w0));
                }
            for (const auto& tri : loc.triangular)
                if (tri.h.eval(GaussRat(0)).is_zero()) {
                    rep.smooth = false;
                    rep.witnesses.push_back("singular on " + n.exceptional_id +
                                            ") at an irrational point");
                }
        });
    return rep;
}

} // namespace speccurve

#endif
