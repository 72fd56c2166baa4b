// Command-line front end: validate/analyze distance matrices, build boundary
// inversion metrics over sampled domains, run the sharpness sweep, and probe
// the rearrangement inequality.  Exit codes: 0 ok, 1 domain failure, 2 parse
// failure.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hypermet/hypermet.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace hypermet;

json witness_json(const QuadrupleWitness& w, const std::vector<std::string>& labels) {
    if (!w.present()) return nullptr;
    json j;
    j["indices"] = w.indices;
    json names = json::array();
    for (std::size_t idx : w.indices) names.push_back(labels[idx]);
    j["labels"] = names;
    j["pairing"] = w.pairing;
    j["defect"] = w.defect;
    return j;
}

ModelSpace parse_space(const std::string& text) {
    if (text == "sphere") return ModelSpace::sphere2();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string head = text.substr(0, colon);
        const std::string tail = text.substr(colon + 1);
        if (head == "euclidean") {
            const double n = parse_real(tail);
            if (n < 1 || n != static_cast<int>(n))
                throw Error(errc::parse_error, "euclidean dimension must be a positive integer");
            return ModelSpace::euclidean(static_cast<int>(n));
        }
        if (head == "hyperbolic") return ModelSpace::hyperbolic2(parse_real(tail));
    }
    throw Error(errc::parse_error,
                "bad space '" + text + "' (expected euclidean:N, hyperbolic:KAPPA, or sphere)");
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(errc::invalid_argument, "cannot write '" + path + "'");
    return out;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_validate(const std::string& path, double tol_rel) {
    const LabeledEntries raw = read_labeled_entries(path);
    const ValidationReport rep = DistanceMatrix::validate_entries(raw.entries, tol_rel);
    json out;
    out["file"] = path;
    out["n"] = raw.labels.size();
    out["tol_rel"] = tol_rel;
    out["symmetric"] = rep.symmetric;
    out["positive_offdiag"] = rep.positive_offdiag;
    out["triangle_ok"] = rep.triangle_ok;
    if (std::isfinite(rep.worst_triple.violation)) {
        json t;
        t["i"] = rep.worst_triple.i;
        t["j"] = rep.worst_triple.j;
        t["k"] = rep.worst_triple.k;
        t["labels"] = {raw.labels[rep.worst_triple.i], raw.labels[rep.worst_triple.j],
                       raw.labels[rep.worst_triple.k]};
        t["violation"] = rep.worst_triple.violation;
        out["worst_triple"] = t;
    }
    out["ok"] = rep.ok();
    std::cout << out.dump(2) << '\n';
    return rep.ok() ? 0 : 1;
}

int cmd_analyze(const std::string& path, double tol_rel, bool have_eps, double eps,
                bool find_eps, bool have_prior, double prior_R) {
    const DistanceMatrix m = read_distance_matrix(path, tol_rel);
    const auto pt = ptolemaic_defect(m);
    const auto gr = gromov_delta(m);
    json out;
    out["file"] = path;
    out["n"] = m.size();
    out["ptolemaic_defect"] =
        pt.witness.present() ? json(pt.defect) : json(nullptr);
    out["delta_min"] = gr.delta_min;
    json wit;
    wit["ptolemaic"] = witness_json(pt.witness, m.labels());
    wit["gromov"] = witness_json(gr.witness, m.labels());
    if (have_eps) {
        const StrongResult sr = strong_defect(m, eps);
        json s;
        s["epsilon"] = sr.epsilon;
        s["max_defect"] = sr.witness.present() ? json(sr.max_defect) : json(nullptr);
        s["feasible"] = sr.feasible;
        out["strong"] = s;
        wit["strong"] = witness_json(sr.witness, m.labels());
    }
    out["witnesses"] = wit;
    if (find_eps) {
        const EpsilonMax em = find_max_strong_epsilon(m);
        out["epsilon_max"] = em.unbounded ? json("unbounded") : json(em.epsilon);
    }
    if (have_prior) {
        json p;
        p["R"] = prior_R;
        p["separation_bound"] = zx_prior_bound(prior_R);
        p["inversion_bound"] = std::log(2.0);
        out["prior_comparison"] = p;
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_rho(const std::string& space_text, const std::string& interior_path,
            const std::string& boundary_path, const std::string& out_path, double tol_rel) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelSpace space = parse_space(space_text);
    LabeledPoints interior = read_points(interior_path, space);
    LabeledPoints boundary = read_points(boundary_path, space);
    const DomainSample sample =
        DomainSample::build(space, std::move(interior.labels), std::move(interior.points),
                            std::move(boundary.labels), std::move(boundary.points));
    const RhoMatrix rm = rho_matrix(sample, tol_rel);
    {
        auto out = open_output(out_path);
        if (has_json_extension(out_path))
            write_distance_matrix_json(out, rm.matrix);
        else
            write_distance_matrix_csv(out, rm.matrix);
    }
    RunManifest man;
    man.command = "rho";
    man.arguments = {"--space", space_text,         "--interior", interior_path,
                     "--boundary", boundary_path,   "--out",      out_path,
                     "--tol-rel", format_real(tol_rel)};
    man.add_input(interior_path);
    man.add_input(boundary_path);
    man.outputs = {out_path};
    man.elapsed_seconds = elapsed_since(t0);
    man.write(out_path + ".manifest.json");
    std::cout << "wrote " << out_path << " (" << rm.matrix.size() << " points, "
              << sample.boundary.size() << " boundary samples)\n";
    return 0;
}

int cmd_sweep(const std::string& space_text, double r, double theta_max, int steps,
              const std::string& extra_path, bool default_extra, double R_flag, bool have_R,
              const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelSpace space = parse_space(space_text);
    const double R = have_R ? R_flag : 10.0 * r;
    std::vector<double> grid = geometric_theta_grid(theta_max, steps);

    std::vector<std::string> extra_labels;
    std::vector<Point> extra_points;
    if (!extra_path.empty()) {
        LabeledPoints extra = read_points(extra_path, space);
        extra_labels = std::move(extra.labels);
        extra_points = std::move(extra.points);
    }
    if (default_extra) {
        extra_labels.push_back("w");
        extra_points.push_back(default_extra_boundary(space, r, R, grid.front()));
    }
    const SharpnessConfig cfg = make_sharpness_config(space, r, std::move(grid), R,
                                                      std::move(extra_labels),
                                                      std::move(extra_points));
    const std::vector<SweepRow> rows = sweep(cfg);
    {
        auto out = open_output(out_path);
        write_sweep_csv(out, rows);
    }
    RunManifest man;
    man.command = "sweep";
    man.arguments = {"--space", space_text,
                     "--r", format_real(r),
                     "--theta-max", format_real(theta_max),
                     "--steps", std::to_string(steps),
                     "--R", format_real(R),
                     "--out", out_path};
    if (!extra_path.empty()) {
        man.arguments.push_back("--extra-boundary");
        man.arguments.push_back(extra_path);
        man.add_input(extra_path);
    }
    if (default_extra) man.arguments.push_back("--default-extra");
    man.outputs = {out_path};
    man.elapsed_seconds = elapsed_since(t0);
    man.write(out_path + ".manifest.json");
    const SweepRow& last = rows.back();
    std::cout << "rows=" << rows.size() << " theta_final=" << format_real(last.theta)
              << " defect_delta=" << format_real(last.defect_delta)
              << " epsilon_max=" << format_real(last.epsilon_max) << '\n';
    return 0;
}

int cmd_lemma_tuple(const std::vector<double>& t, double tol) {
    const auto [lhs, rhs] = rearrangement_sides(t[0], t[1], t[2], t[3]);
    const EqualityCase eq = equality_case(t[0], t[1], t[2], t[3], tol);
    json out;
    out["tuple"] = t;
    out["lhs"] = lhs;
    out["rhs"] = rhs;
    out["gap"] = rhs - lhs;
    json e;
    e["i"] = eq.i;
    e["ii"] = eq.ii;
    e["iii"] = eq.iii;
    e["any"] = eq.any();
    out["equality_case"] = e;
    std::cout << out.dump(2) << '\n';
    const bool holds = lhs <= rhs + tol * (1.0 + rhs);
    return holds ? 0 : 1;
}

// Zero- and tie-heavy sampler: each slot is 0, a small integer, or uniform
// real; afterwards ties are forced with fixed probability.
std::array<double, 4> lemma_sample(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> value(0.0, 4.0);
    std::uniform_int_distribution<int> small(0, 4);
    std::array<double, 4> t{};
    for (double& v : t) {
        const double u = unit(rng);
        if (u < 0.25)
            v = 0.0;
        else if (u < 0.5)
            v = small(rng);
        else
            v = value(rng);
    }
    if (unit(rng) < 0.25) t[3] = t[0];
    if (unit(rng) < 0.25) t[2] = t[1];
    return t;
}

int cmd_lemma_random(long long count, std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    long long violations = 0, equalities = 0, mismatches = 0;
    double worst_gap = 0.0;  // most negative rhs - lhs, scaled
    for (long long k = 0; k < count; ++k) {
        const auto t = lemma_sample(rng);
        const auto [lhs, rhs] = rearrangement_sides(t[0], t[1], t[2], t[3]);
        const double slack = tol * (1.0 + rhs);
        if (lhs > rhs + slack) ++violations;
        worst_gap = std::min(worst_gap, rhs - lhs);
        const bool eq_numeric = std::abs(lhs - rhs) <= slack;
        const bool eq_flags = equality_case(t[0], t[1], t[2], t[3], tol).any();
        if (eq_numeric) ++equalities;
        if (eq_numeric != eq_flags) ++mismatches;
    }
    json out;
    out["samples"] = count;
    out["seed"] = seed;
    out["tol"] = tol;
    out["violations"] = violations;
    out["equality_hits"] = equalities;
    out["case_mismatches"] = mismatches;
    out["worst_gap"] = worst_gap;
    std::cout << out.dump(2) << '\n';
    return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary-inversion metrics and four-point hyperbolicity scans"};
    app.require_subcommand(1);

    std::string matrix_path, space_text, interior_path, boundary_path, out_path, extra_path;
    double tol_rel = DistanceMatrix::default_tol_rel;
    double eps = 1.0, prior_R = 1.0, r = 1.0, theta_max = 0.5, R_flag = 10.0, lemma_tol = 1e-12;
    int steps = 20;
    long long random_count = 0;
    std::uint64_t seed = 1;
    bool find_eps = false, default_extra = false;
    std::vector<double> tuple;

    auto* validate = app.add_subcommand("validate", "check metric axioms of a distance matrix");
    validate->add_option("matrix", matrix_path, "matrix CSV or JSON")->required();
    validate->add_option("--tol-rel", tol_rel, "relative tolerance");

    auto* analyze = app.add_subcommand("analyze", "four-point analysis of a distance matrix");
    analyze->add_option("matrix", matrix_path, "matrix CSV or JSON")->required();
    analyze->add_option("--tol-rel", tol_rel, "relative tolerance");
    auto* eps_opt = analyze->add_option("--epsilon", eps, "check strong hyperbolicity at this parameter");
    analyze->add_flag("--find-epsilon", find_eps, "bisect for the largest feasible parameter");
    auto* prior_opt =
        analyze->add_option("--prior-R", prior_R, "also print the separation-based bound for this R");

    auto* rho_cmd = app.add_subcommand("rho", "boundary-inversion metric over a sampled domain");
    rho_cmd->add_option("--space", space_text, "euclidean:N | hyperbolic:KAPPA | sphere")->required();
    rho_cmd->add_option("--interior", interior_path, "interior point CSV")->required();
    rho_cmd->add_option("--boundary", boundary_path, "boundary point CSV")->required();
    rho_cmd->add_option("--out", out_path, "output matrix path (.csv or .json)")->required();
    rho_cmd->add_option("--tol-rel", tol_rel, "relative tolerance");

    auto* sweep_cmd = app.add_subcommand("sweep", "sharpness sweep toward theta = 0");
    sweep_cmd->add_option("--space", space_text, "euclidean:2 | hyperbolic:KAPPA")->required();
    sweep_cmd->add_option("--r", r, "half distance between the anchor boundary points");
    sweep_cmd->add_option("--theta-max", theta_max, "largest theta of the geometric grid");
    sweep_cmd->add_option("--steps", steps, "grid size");
    sweep_cmd->add_option("--extra-boundary", extra_path, "extra boundary point CSV");
    sweep_cmd->add_flag("--default-extra", default_extra,
                        "add one witness point past q at distance max{R, 6 eta}");
    auto* R_opt = sweep_cmd->add_option("--R", R_flag, "required clearance of extra points from q (default 10r)");
    sweep_cmd->add_option("--out", out_path, "output CSV path")->required();

    auto* lemma_cmd = app.add_subcommand("lemma", "evaluate the rearrangement inequality");
    auto* tuple_opt = lemma_cmd->add_option("--tuple", tuple, "four nonnegative reals")->expected(4);
    auto* random_opt = lemma_cmd->add_option("--random", random_count, "sample this many random tuples");
    lemma_cmd->add_option("--seed", seed, "random batch seed");
    lemma_cmd->add_option("--tol", lemma_tol, "relative equality tolerance");
    tuple_opt->excludes(random_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(matrix_path, tol_rel);
        if (app.got_subcommand(analyze))
            return cmd_analyze(matrix_path, tol_rel, !eps_opt->empty(), eps, find_eps,
                               !prior_opt->empty(), prior_R);
        if (app.got_subcommand(rho_cmd))
            return cmd_rho(space_text, interior_path, boundary_path, out_path, tol_rel);
        if (app.got_subcommand(sweep_cmd))
            return cmd_sweep(space_text, r, theta_max, steps, extra_path, default_extra, R_flag,
                             !R_opt->empty(), out_path);
        if (app.got_subcommand(lemma_cmd)) {
            if (!tuple_opt->empty()) return cmd_lemma_tuple(tuple, lemma_tol);
            if (!random_opt->empty()) return cmd_lemma_random(random_count, seed, lemma_tol);
            throw Error(errc::invalid_argument, "lemma needs --tuple or --random");
        }
    } catch (const Error& e) {
        std::cerr << "hypermet: " << to_string(e.code()) << ": " << e.what() << '\n';
        return e.code() == errc::parse_error ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "hypermet: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
