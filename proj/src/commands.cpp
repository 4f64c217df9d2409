#include "virial/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <vector>

#include "virial/classical.hpp"
#include "virial/errors.hpp"
#include "virial/expectations.hpp"
#include "virial/cli/report.hpp"

namespace virial::cli {

namespace {

struct StateResult {
    StateSpec spec;
    std::optional<Eigenstate> state;
    std::string failure;
};

Eigenstate make_state(const RunConfig& c, const StateSpec& spec)
{
    const ScaledPotential p = c.potential.build();
    const DimensionConfig dim{c.N, spec.l};
    const Grid grid = c.rho_max > 0.0 ? Grid::uniform(c.grid_h, c.rho_max) : default_grid(p, dim, spec.n, c.grid_h);
    if (c.source == "solver") return solve_eigenstate(p, dim, spec.n, grid, c.solver_tolerance);

    if (c.N != 3) throw domain_error("exact states exist for N = 3 only");
    const auto& kind = c.potential.kind;
    if (kind == "oscillator" && spec.l == 0) return exact_oscillator_l0(spec.n, grid);
    if (kind == "linear" && spec.l == 0) return exact_linear_l0(spec.n + 1, grid);
    if (kind == "coulomb" && c.potential.strength == 1.0) return exact_coulomb(spec.n + spec.l + 1, spec.l, grid);
    throw domain_error("no closed-form state for this potential and l");
}

std::vector<StateResult> solve_states(const RunConfig& c)
{
    std::vector<StateResult> out(c.states.size());
    const long count = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        out[i].spec = c.states[i];
        try {
            out[i].state = make_state(c, c.states[i]);
        } catch (const std::exception& e) {
            out[i].failure = e.what();
        }
    }
    return out;
}

std::string spec_label(const RunConfig& c, const StateSpec& s)
{
    return "N" + std::to_string(c.N) + "_n" + std::to_string(s.n) + "_l" + std::to_string(s.l);
}

ProbeFunction gauss_probe()
{
    auto g = [](double x) { return std::exp(-x * x); };
    return ProbeFunction::custom(
        g, [g](double x) { return -2.0 * x * g(x); }, [g](double x) { return (4.0 * x * x - 2.0) * g(x); },
        [g](double x) { return (12.0 * x - 8.0 * x * x * x) * g(x); }, 0.0, 1.0, "gauss");
}

ProbeFunction exp_probe()
{
    auto g = [](double x) { return std::exp(-x); };
    return ProbeFunction::custom(
        g, [g](double x) { return -g(x); }, g, [g](double x) { return -g(x); }, 0.0, 1.0, "exp");
}

// nullopt when the token does not apply to l (the -2l probe at l = 0).
std::optional<ProbeFunction> resolve_probe(const std::string& token, int l)
{
    if (token == "gauss") return gauss_probe();
    if (token == "exp") return exp_probe();
    if (token == "2l+2") return ProbeFunction::power(2.0 * l + 2.0);
    if (token == "-2l") {
        if (l == 0) return std::nullopt;
        return ProbeFunction::power(-2.0 * l);
    }
    return ProbeFunction::power(std::stod(token));
}

ReportRow failure_row(std::string id, const RunConfig& c, const StateSpec& s, std::string why)
{
    ReportRow row;
    auto& r = row.report;
    r.id = std::move(id);
    r.state = spec_label(c, s);
    r.N = c.N;
    r.n = s.n;
    r.l = s.l;
    r.lhs = r.rhs = r.residual = r.relative_residual = r.error = std::nan("");
    row.failure = std::move(why);
    return row;
}

using Task = std::function<RelationReport(const Eigenstate&)>;

struct WorkItem {
    std::size_t state;
    std::string id; // used for failure rows
    Task task;
};

std::vector<WorkItem> plan(const RunConfig& c, const std::vector<StateResult>& states, bool ndim)
{
    std::vector<WorkItem> items;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const int l = states[i].spec.l;
        const bool general = ndim || std::find(c.relations.begin(), c.relations.end(), "general") != c.relations.end();
        if (general) {
            std::vector<std::string> seen; // "2" and "2l+2" coincide at l = 0
            for (const auto& token : c.probes) {
                auto f = resolve_probe(token, l);
                if (!f || std::find(seen.begin(), seen.end(), f->name) != seen.end()) continue;
                seen.push_back(f->name);
                const std::string id = (ndim ? "NDIM[" : "GEN[") + f->name + "]";
                items.push_back({i, id, [f = *f, ndim](const Eigenstate& s) {
                                     return ndim ? ndim_residual(s, f) : general_residual(s, f);
                                 }});
            }
        }
        if (ndim) continue;
        if (std::find(c.relations.begin(), c.relations.end(), "special") != c.relations.end()) {
            for (auto sc : {SpecialCase::J0, SpecialCase::J1_virial, SpecialCase::J2, SpecialCase::J3,
                            SpecialCase::J2L2, SpecialCase::JNEG2L}) {
                if (sc == SpecialCase::JNEG2L && l == 0) continue;
                items.push_back({i, to_string(sc), [sc](const Eigenstate& s) { return special_case_residual(s, sc); }});
            }
        }
        if (std::find(c.relations.begin(), c.relations.end(), "power") != c.relations.end()) {
            const auto pl = states[i].state->potential.as_power_law();
            for (auto pc : {PowerCase::P1, PowerCase::p1, PowerCase::P2, PowerCase::P3, PowerCase::P4, PowerCase::P5}) {
                if (pl && !power_case_applies(pc, l, pl->m)) continue;
                items.push_back({i, to_string(pc), [pc](const Eigenstate& s) {
                                     const auto pl = s.potential.as_power_law();
                                     if (!pl) throw domain_error("power-law relations need v = A rho^m / 2");
                                     return power_law_relation(s, *pl, pc);
                                 }});
            }
        }
    }
    return items;
}

std::vector<ReportRow> evaluate(const RunConfig& c, const std::vector<StateResult>& states,
                                const std::vector<WorkItem>& items)
{
    std::vector<ReportRow> rows(items.size());
    const long count = static_cast<long>(items.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < count; ++k) {
        const auto& item = items[k];
        const auto& st = states[item.state];
        try {
            rows[k].report = item.task(*st.state);
        } catch (const std::exception& e) {
            rows[k] = failure_row(item.id, c, st.spec, e.what());
        }
    }
    return rows;
}

nlohmann::json metadata(const std::string& command, const RunConfig& c)
{
    return {{"command", command},
            {"timestamp", iso_timestamp()},
            {"tolerance", c.tolerance},
            {"config", to_canonical(c)}};
}

void print_rows(const std::vector<ReportRow>& rows, double tol, std::ostream& out)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-22s %-12s %22s %22s %10s\n", "relation", "state", "lhs", "rhs", "rel.res");
    out << buf;
    for (const auto& row : rows) {
        const auto& r = row.report;
        if (!row.failure.empty()) {
            out << r.id << "  " << r.state << "  error: " << row.failure << "\n";
            continue;
        }
        std::snprintf(buf, sizeof buf, "%-22s %-12s %22.15g %22.15g %10.2e%s\n", r.id.c_str(), r.state.c_str(), r.lhs,
                      r.rhs, r.relative_residual, row.passes(tol) ? "" : "  FAIL");
        out << buf;
    }
}

// Worst offender: an unevaluated row first, else the largest relative residual.
const ReportRow* worst(const std::vector<ReportRow>& rows)
{
    const ReportRow* w = nullptr;
    for (const auto& row : rows) {
        if (!row.failure.empty()) return &row;
        if (!w || std::fabs(row.report.relative_residual) > std::fabs(w->report.relative_residual)) w = &row;
    }
    return w;
}

int run_relations(const std::string& command, const RunConfig& c, bool ndim, std::ostream& out, std::ostream& err)
{
    const auto states = solve_states(c);
    std::vector<ReportRow> rows;
    std::vector<StateResult> solved;
    for (const auto& s : states) {
        if (s.state) {
            solved.push_back(s);
        } else {
            rows.push_back(failure_row("SOLVE", c, s.spec, s.failure));
        }
    }
    auto evaluated = evaluate(c, solved, plan(c, solved, ndim));
    rows.insert(rows.end(), evaluated.begin(), evaluated.end());
    sort_rows(rows);

    nlohmann::json report;
    report["metadata"] = metadata(command, c);
    report["relations"] = nlohmann::json::array();
    for (const auto& row : rows) report["relations"].push_back(row_json(row));
    const std::filesystem::path dir = c.output_dir;
    write_json(dir / "reports" / "relations.json", report);
    write_text(dir / "reports" / "relations.csv", relations_csv(rows));

    print_rows(rows, c.tolerance, out);
    const ReportRow* w = worst(rows);
    if (w && !w->passes(c.tolerance)) {
        err << "verification failed: worst offender " << w->report.id << " on " << w->report.state;
        if (!w->failure.empty()) {
            err << " (" << w->failure << ")\n";
        } else {
            err << " with relative residual " << w->report.relative_residual << " > " << c.tolerance << "\n";
        }
        return exit_verification;
    }
    out << rows.size() << " relations within " << c.tolerance << "\n";
    return exit_ok;
}

} // namespace

RunConfig apply_overrides(RunConfig c, const Overrides& o)
{
    if (o.out) c.output_dir = o.out->string();
    if (o.tol) {
        if (!(*o.tol > 0.0) || !std::isfinite(*o.tol)) throw config_error("--tol must be a positive number");
        c.tolerance = *o.tol;
    }
    if (o.grid_h) {
        if (!(*o.grid_h > 0.0) || !std::isfinite(*o.grid_h)) throw config_error("--grid-h must be a positive number");
        c.grid_h = *o.grid_h;
    }
    return c;
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const auto states = solve_states(c);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%4s %4s %20s %20s %12s\n", "n", "l", "eps", "C2", "norm_res");
    out << buf;
    int status = exit_ok;
    for (const auto& s : states) {
        if (!s.state) {
            out << "   " << s.spec.n << "    " << s.spec.l << "  error: " << s.failure << "\n";
            err << "solve failed for " << spec_label(c, s.spec) << ": " << s.failure << "\n";
            status = exit_verification;
            continue;
        }
        write_state(c.output_dir, *s.state);
        std::snprintf(buf, sizeof buf, "%4d %4d %20.12g %20.12g %12.2e\n", s.spec.n, s.spec.l, s.state->eps,
                      s.state->C2, s.state->norm_residual);
        out << buf;
    }
    return status;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    return run_relations("verify", c, false, out, err);
}

int cmd_ndim(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    return run_relations("ndim", c, true, out, err);
}

int cmd_classical(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    if (!c.classical.enabled) throw config_error("the classical command needs a [classical] section");
    const auto& cl = c.classical;
    const ScaledPotential p = c.potential.build();

    nlohmann::json report;
    report["metadata"] = metadata("classical", c);
    report["E"] = cl.E;
    report["l2"] = cl.l2;
    int status = exit_ok;
    std::string worst_name;
    double worst_value = 0.0;
    auto track = [&](const std::string& name, double rel) {
        if (!(std::fabs(rel) <= c.tolerance) && (worst_name.empty() || std::fabs(rel) > worst_value)) {
            worst_name = name;
            worst_value = std::fabs(rel);
        }
    };

    try {
        const ClassicalOrbit o = make_orbit(p, cl.E, cl.l2, cl.nodes);
        report["r_min"] = o.r_min;
        report["r_max"] = o.r_max;
        report["period"] = o.period;
        report["circular"] = o.circular;
        const double T = period_average(o, [&](double r) { return cl.E - p(r); });
        const double V = period_average(o, [&](double r) { return p(r); });
        const double Tr = period_average(o, [&](double r) { return o.radial_kinetic(r); });
        report["averages"] = {{"T", T}, {"V", V}, {"T_r", Tr}};
        out << "orbit E=" << cl.E << " l2=" << cl.l2 << ": r in [" << o.r_min << ", " << o.r_max
            << "], period " << o.period << ", <T> " << T << "\n";
        report["relations"] = nlohmann::json::array();
        for (double j : cl.probes) {
            const RelationReport r = classical_virial_residual(o, ProbeFunction::power(j));
            report["relations"].push_back(row_json({r, {}}));
            out << "  " << r.id << " relative residual " << r.relative_residual << "\n";
            track(r.id, r.relative_residual);
        }
    } catch (const no_orbit& e) {
        report["failure"] = std::string("no orbit: ") + e.what();
        err << "classical: no orbit: " << e.what() << "\n";
        status = exit_verification;
    }

    if (cl.gap_state) {
        const StateSpec spec = *cl.gap_state;
        nlohmann::json gaps = nlohmann::json::array();
        try {
            if (c.N != 3) throw domain_error("the gap analysis is set up for N = 3");
            const Eigenstate s = make_state(c, spec);
            const ClassicalOrbit oq = make_orbit(p, s.eps, spec.l * (spec.l + 1.0), cl.nodes);
            for (double j : cl.probes) {
                const ProbeFunction f = ProbeFunction::power(j);
                nlohmann::json g{{"probe", f.name}, {"state", state_label(s)}, {"eps", s.eps}};
                try {
                    const GapReport r = quantum_classical_gap(s, oq, f);
                    const double rel = r.residual / std::max(1.0, std::fabs(r.quantum_lhs));
                    g["quantum_lhs"] = r.quantum_lhs;
                    g["classical_lhs"] = r.classical_lhs;
                    g["predicted_gap"] = r.predicted_gap;
                    g["residual"] = r.residual;
                    out << "  gap " << f.name << " on " << state_label(s) << ": quantum " << r.quantum_lhs
                        << " classical " << r.classical_lhs << " predicted " << r.predicted_gap << " residual "
                        << r.residual << "\n";
                    track("GAP[" + f.name + "]", rel);
                } catch (const domain_error& e) {
                    g["failure"] = e.what();
                    out << "  gap " << f.name << ": " << e.what() << "\n";
                }
                gaps.push_back(g);
            }
        } catch (const std::exception& e) {
            gaps.push_back({{"failure", e.what()}});
            err << "classical: gap analysis failed: " << e.what() << "\n";
            status = exit_verification;
        }
        report["gap"] = gaps;
    }

    write_json(std::filesystem::path(c.output_dir) / "reports" / "classical.json", report);
    if (!worst_name.empty()) {
        err << "verification failed: worst offender " << worst_name << " with relative residual " << worst_value
            << " > " << c.tolerance << "\n";
        status = exit_verification;
    }
    return status;
}

int run(const std::string& command, const std::string& config_path, const Overrides& o, std::ostream& out,
        std::ostream& err)
{
    try {
        const RunConfig c = apply_overrides(load_config(config_path), o);
        if (command == "solve") return cmd_solve(c, out, err);
        if (command == "verify") return cmd_verify(c, out, err);
        if (command == "ndim") return cmd_ndim(c, out, err);
        if (command == "classical") return cmd_classical(c, out, err);
        throw config_error("unknown command '" + command + "'");
    } catch (const config_error& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "output error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }
}

} // namespace virial::cli
