#ifndef SPECCURVE_RUNNER_HPP
#define SPECCURVE_RUNNER_HPP

// Command orchestration over the pipeline: every command runs its
// prerequisites; failures recorded in the report set exit code 2, input
// errors raise parse_error/value_error (exit code 1 at the CLI).

#include <chrono>

#include "speccurve/pipeline.hpp"

namespace speccurve {

struct RunOptions {
    std::string command = "all";  // validate|spectral|casimir|tower|verify|geometry|roundtrip|all|sweep
    std::uint64_t seed = 0;
    int truncation_extra = 4;
    int jobs = 1;
    bool include_timing = true;
};

struct RunOutcome {
    ordered_json report;
    int exit_code = 0;
};

namespace detail_run {

inline int stage_rank(const std::string& cmd) {
    if (cmd == "validate") return 0;
    if (cmd == "spectral") return 1;
    if (cmd == "casimir") return 2;
    if (cmd == "tower") return 3;
    if (cmd == "verify") return 4;
    if (cmd == "geometry") return 5;
    if (cmd == "roundtrip") return 6;
    if (cmd == "all") return 7;
    throw parse_error("unknown command '" + cmd + "'");
}

} // namespace detail_run

inline RunOutcome run_single(const RunConfig& cfg, const RunOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    RunOutcome out;
    out.report["schema_version"] = "1";
    out.report["command"] = opt.command;
    out.report["echo"] = canonical_echo(cfg);

    int want = detail_run::stage_rank(opt.command);
    bool all = opt.command == "all";
    bool need_spectral = all || want >= 1;
    bool need_casimir = all || want >= 2;
    bool need_tower = all || (want >= 3 && want <= 5);
    bool need_verify = all || want == 4 || want == 5;
    bool need_geometry = all || want == 5;
    bool need_roundtrip = all || want == 6;
    bool failed = false;

    // model construction
    std::optional<HiggsField> H;
    std::optional<SpectralData> S;
    if (cfg.has_higgs) {
        H = build_higgs(cfg.rank, cfg.higgs_points, cfg.tail);
    } else {
        S = cfg.spectral;
    }

    // validate
    bool valid = true;
    {
        ValidationReport rep = cfg.has_higgs ? validate_higgs(*H) : validate_spectral(*S);
        out.report["validation"] = detail_io::validation_json(rep);
        if (!rep.ok) {
            failed = true;
            valid = false;
        }
    }

    std::optional<CasimirData> cas;
    std::optional<BlowupTower> tower;
    std::optional<ConditionReport> conds;

    try {
        if (need_spectral && valid) {
            if (!S) S = char_poly(*H);
            ordered_json sj;
            sj["rank"] = S->rank;
            sj["deg_D"] = S->deg_D();
            sj["deg_L"] = S->deg_L();
            ordered_json coeffs = ordered_json::array();
            for (const auto& a : S->a) coeffs.push_back(a.str("z"));
            sj["coefficients"] = coeffs;
            ordered_json charts = ordered_json::array();
            for (std::size_t i = 0; i < S->points.size(); ++i) {
                ordered_json cj;
                cj["point"] = static_cast<int>(i);
                cj["equation"] = to_chart(*S, i).Q.str("z", "w");
                charts.push_back(cj);
            }
            sj["charts"] = charts;
            sj["reduced"] = is_reduced(*S);
            out.report["spectral"] = sj;
        }
        if (need_casimir && valid) {
            CasimirOptions copt;
            copt.truncation_extra = opt.truncation_extra;
            cas = cfg.has_higgs ? casimir(*H, copt) : casimir(*S, copt);
            out.report["casimir"] = detail_io::casimir_json(*cas);
        }
        if (need_tower && valid) {
            tower = build_tower(*cas, *S);
            out.report["tower"] = detail_io::tower_json(*tower);
        }
        if (need_verify && tower.has_value()) {
            conds = check_bnr_conditions(*S, *tower);
            out.report["conditions"] = detail_io::conditions_json(*conds);
            if (!conds->all_pass) failed = true;
        }
        if (!cfg.flags.empty() && (need_verify || all) && cfg.has_higgs) {
            // parabolic weights ride along: compatible flags split across the
            // joint eigenspaces and attach to the exceptional intersection
            // points of the matching leaves
            ordered_json fl = ordered_json::array();
            for (const auto& flag : cfg.flags) {
                ordered_json fj;
                fj["point"] = flag.point_index;
                if (flag.point_index < 0 ||
                    flag.point_index >= static_cast<int>(H->points.size())) {
                    fj["compatible"] = false;
                    fj["reason"] = "flag point index out of range";
                    fl.push_back(fj);
                    failed = true;
                    continue;
                }
                const SingularPoint& pt = H->points[static_cast<std::size_t>(flag.point_index)];
                FlagSplitting sp = check_flag_compatibility(flag, pt, cfg.rank);
                fj["compatible"] = sp.compatible;
                if (!sp.compatible) {
                    fj["reason"] = sp.reason;
                    failed = true;
                } else {
                    ordered_json blocks = ordered_json::array();
                    for (const auto& blk : sp.blocks) {
                        ordered_json bj;
                        ordered_json idx = ordered_json::array();
                        for (int i : blk.block) idx.push_back(i);
                        bj["basis_indices"] = idx;
                        ordered_json dims = ordered_json::array();
                        for (std::size_t d : blk.dims) dims.push_back(static_cast<int>(d));
                        bj["induced_dims"] = dims;
                        // locate the leaf this block feeds (matching jet tuple)
                        if (tower && pt.order >= 1) {
                            const auto& jets =
                                pt.normal_form->jets[static_cast<std::size_t>(blk.block[0])];
                            for (const auto& tp : tower->points) {
                                if (tp.point_index != flag.point_index) continue;
                                detail_blowup::walk(tp.roots, [&](const BlowupNode& n, bool leaf) {
                                    if (leaf && n.chart_jet == jets)
                                        bj["leaf"] = n.exceptional_id + ")";
                                });
                            }
                        }
                        blocks.push_back(bj);
                    }
                    fj["blocks"] = blocks;
                    ordered_json ws = ordered_json::array();
                    for (const auto& w : flag.weights) ws.push_back(rat_to_string(w));
                    fj["weights"] = ws;
                }
                fl.push_back(fj);
            }
            out.report["parabolic"] = fl;
        }
        if (need_geometry && tower.has_value()) {
            IntersectionLattice L = lattice(*tower, *S);
            ordered_json gj;
            gj["e"] = L.e;
            ordered_json basis = ordered_json::array();
            for (std::size_t k = 0; k < L.labels.size(); ++k)
                basis.push_back(k < 2 ? L.labels[k] : L.labels[k] + ")");
            gj["basis"] = basis;
            DivisorClass C = spectral_class(L, S->rank);
            DivisorClass K = canonical_class(L);
            DegeneracyDivisor D = degeneracy_class(L, *S);
            gj["classes"]["spectral"] = detail_io::class_json(C);
            gj["classes"]["canonical"] = detail_io::class_json(K);
            gj["classes"]["degeneracy"] = detail_io::class_json(D.cls);
            gj["classes"]["ample"] = detail_io::class_json(ample_class(L));
            gj["anticanonical_identity"] = (D.cls == -1LL * K);
            gj["two_form_pole_orders_match"] = D.symbolic_match;
            gj["genus"] = std::to_string(arithmetic_genus(C, L));
            gj["degree"]["delta"] = std::to_string(cfg.delta);
            gj["degree"]["value"] = std::to_string(spectral_degree(cfg.delta, S->rank, L.e));
            HilbertPolynomial HP = hilbert_polynomial(C, L);
            gj["hilbert"]["slope"] = std::to_string(HP.slope);
            gj["hilbert"]["constant"] = std::to_string(HP.constant);
            SmoothnessReport sm = check_smoothness(*S, *tower);
            gj["smooth"] = sm.smooth;
            ordered_json wit = ordered_json::array();
            for (const auto& w : sm.witnesses) wit.push_back(w);
            gj["smoothness_witnesses"] = wit;
            out.report["geometry"] = gj;
        }
        if (need_roundtrip && valid) {
            if (!S) S = char_poly(*H);
            HiggsField comp = companion_higgs(*S);
            SpectralData S2 = char_poly(comp);
            bool coeffs_equal = (S2 == *S);
            CasimirOptions copt;
            copt.truncation_extra = opt.truncation_extra;
            CasimirData cd1 = cas ? *cas : casimir(*S, copt);
            CasimirData cd2 = casimir(S2, copt);
            bool trees_ok = cd1.points.size() == cd2.points.size();
            for (std::size_t i = 0; trees_ok && i < cd1.points.size(); ++i)
                trees_ok = trees_equal(cd1.points[i], cd2.points[i]);
            ordered_json rj;
            rj["coefficients_equal"] = coeffs_equal;
            rj["casimir_equal"] = trees_ok;
            rj["ok"] = coeffs_equal && trees_ok;
            out.report["roundtrip"] = rj;
            if (!(coeffs_equal && trees_ok)) failed = true;
        }
    } catch (const precision_error& e) {
        out.report["error"] = std::string("precision: ") + e.what();
        failed = true;
    } catch (const inexact_error& e) {
        out.report["error"] = std::string("inexact: ") + e.what();
        failed = true;
    } catch (const consistency_error& e) {
        out.report["error"] = std::string("consistency: ") + e.what();
        failed = true;
    }

    if (opt.include_timing) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0).count();
        out.report["timing_ms"] = std::to_string(ms);
    }
    out.exit_code = failed ? 2 : 0;
    return out;
}

// ------------------------------------------------------------- sweep -------

namespace detail_run {

struct SampleResult {
    int index = 0;
    std::vector<GaussRat> values;
    std::string category;  // smooth_all_conditions | singular | reducible |
                           // center_collision_skipped | failed
    bool conditions_all_pass = false;
    bool smooth = false;
    std::string note;
};

inline SampleResult run_sample(const RunConfig& base, const std::vector<GaussRat>& values,
                               int index, int truncation_extra) {
    SampleResult res;
    res.index = index;
    res.values = values;
    const SweepSpec& sw = base.sweep.value();

    std::vector<SingularPoint> pts = base.higgs_points;
    for (std::size_t v = 0; v < sw.vary.size(); ++v) {
        const VaryEntry& ve = sw.vary[v];
        if (ve.point < 0 || ve.point >= static_cast<int>(pts.size()))
            throw parse_error("vary.point out of range");
        auto& pt = pts[static_cast<std::size_t>(ve.point)];
        auto& nf = pt.normal_form.value();
        if (ve.kind == "jet") {
            nf.jets.at(static_cast<std::size_t>(ve.basis)).at(static_cast<std::size_t>(ve.level)) =
                values[v];
        } else if (ve.kind == "residue") {
            nf.residue(static_cast<std::size_t>(ve.row), static_cast<std::size_t>(ve.col)) = values[v];
        } else {
            pt.location = values[v];
        }
    }
    // residue block structure can be broken by a varied entry; rebuild below
    // rejects that case and it counts as a failed sample
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            if (pts[a].location == pts[b].location) {
                res.category = "center_collision_skipped";
                return res;
            }
    if (sw.balance_point) {
        std::size_t bp = static_cast<std::size_t>(*sw.balance_point);
        if (bp >= pts.size()) throw parse_error("balance_point out of range");
        std::size_t r = static_cast<std::size_t>(base.rank);
        QMat sum(r, r);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k == bp) continue;
            const auto& nf = pts[k].normal_form.value();
            sum += nf.frame * nf.residue * nf.frame.inverse();
        }
        auto& nfb = pts[bp].normal_form.value();
        nfb.residue = nfb.frame.inverse() * (QMat(r, r) - sum) * nfb.frame;
    }

    try {
        HiggsField H = build_higgs(base.rank, pts, base.tail);
        SpectralData S = char_poly(H);
        CasimirOptions copt;
        copt.truncation_extra = truncation_extra;
        CasimirData cd = casimir(H, copt);
        BlowupTower T = build_tower(cd, S);
        ConditionReport conds = check_bnr_conditions(S, T);
        res.conditions_all_pass = conds.all_pass;
        SmoothnessReport sm = check_smoothness(S, T);
        res.smooth = sm.smooth;
        if (conds.irreducibility.base == BaseIrreducibility::ReducibleWithFactors) {
            res.category = "reducible";
        } else if (!sm.smooth) {
            res.category = "singular";
            res.note = sm.witnesses.empty() ? "" : sm.witnesses.front();
        } else if (conds.all_pass) {
            res.category = "smooth_all_conditions";
        } else {
            res.category = "failed";
            for (const auto& r : conds.results)
                if (!r.pass) res.note = r.id + ": " + r.detail;
        }
    } catch (const error& e) {
        res.category = "failed";
        res.note = e.what();
    }
    return res;
}

} // namespace detail_run

// Deterministic parameter sweep over the declared Q(i) grid. Sample values
// are drawn from a single splitmix64 stream seeded by `seed`; samples then
// run independently (in parallel up to `jobs`) and are reported in index
// order, so the report bytes depend only on (config, seed).
inline RunOutcome run_sweep(const RunConfig& cfg, const RunOptions& opt) {
    if (!cfg.sweep) throw parse_error("sweep command needs a sweep section in the config");
    if (!cfg.has_higgs) throw parse_error("sweep rebuilds via the higgs data; spectral-only configs cannot sweep");
    const SweepSpec& sw = cfg.sweep.value();
    std::uint64_t seed = sw.seed ? *sw.seed : opt.seed;

    SplitMix64 rng(seed);
    std::vector<std::vector<GaussRat>> draws(static_cast<std::size_t>(sw.samples));
    for (auto& d : draws) {
        d.resize(sw.vary.size());
        for (auto& v : d) v = sw.grid[static_cast<std::size_t>(rng.below(sw.grid.size()))];
    }

    std::vector<detail_run::SampleResult> results(draws.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t k = next.fetch_add(1);
            if (k >= draws.size()) return;
            results[k] = detail_run::run_sample(cfg, draws[k], static_cast<int>(k),
                                                opt.truncation_extra);
        }
    };
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    RunOutcome out;
    out.report["schema_version"] = "1";
    out.report["command"] = "sweep";
    out.report["seed"] = std::to_string(seed);
    out.report["echo"] = canonical_echo(cfg);
    ordered_json samples = ordered_json::array();
    long long n_smooth = 0, n_singular = 0, n_reducible = 0, n_collision = 0, n_failed = 0;
    for (const auto& r : results) {
        ordered_json sj;
        sj["index"] = r.index;
        ordered_json vals = ordered_json::array();
        for (const auto& v : r.values) vals.push_back(gauss_to_string(v));
        sj["values"] = vals;
        sj["category"] = r.category;
        sj["conditions_all_pass"] = r.conditions_all_pass;
        sj["smooth"] = r.smooth;
        if (!r.note.empty()) sj["note"] = r.note;
        samples.push_back(sj);
        if (r.category == "smooth_all_conditions") ++n_smooth;
        else if (r.category == "singular") ++n_singular;
        else if (r.category == "reducible") ++n_reducible;
        else if (r.category == "center_collision_skipped") ++n_collision;
        else ++n_failed;
    }
    out.report["samples"] = samples;
    out.report["aggregate"]["smooth_all_conditions"] = n_smooth;
    out.report["aggregate"]["singular"] = n_singular;
    out.report["aggregate"]["reducible"] = n_reducible;
    out.report["aggregate"]["center_collision_skipped"] = n_collision;
    out.report["aggregate"]["failed"] = n_failed;
    out.exit_code = 0;
    return out;
}

inline RunOutcome run_command(const nlohmann::json& config_json, const RunOptions& opt) {
    RunConfig cfg = parse_config(config_json);
    if (opt.command == "sweep") return run_sweep(cfg, opt);
    return run_single(cfg, opt);
}

} // namespace speccurve

#endif
