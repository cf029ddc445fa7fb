#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>

#include "checks.hpp"
#include "io.hpp"

using namespace atlas;
using nlohmann::json;

namespace {

enum Exit { ok = 0, numerical = 1, invalid = 2, degenerate = 3 };

struct Options {
    double a = reference_params().a;
    double b = reference_params().b;
    std::string z = "3+0.5i";
    std::string z0 = "3+0.5i";
    std::string beta;
    std::string eps = "0.1";
    std::string domain;
    std::string graph;
    std::string out;
    std::string svg;
    std::string filter = "all";
    bool strict = false;
    std::uint64_t seed = 1;
    bool machine = false;
    int n = 10;
    int n_limit = 40;
    int branch = 1;
    int loops = 100;
    double x1 = 0, x2 = 0, x3 = 0;
};

PhaseParams params(const Options& o) { return {o.a, o.b}; }

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

void emit(const Options& o, const json& machine, const std::string& human) {
    if (o.machine)
        std::cout << machine.dump(1) << "\n";
    else
        std::cout << human;
}

void output(const Options& o, const std::string& content) {
    if (o.out.empty())
        std::cout << content;
    else
        io::write_atomic(o.out, content);
}

StokesGraph load_graph(const Options& o) {
    if (!o.graph.empty()) return io::graph_from_json(io::read_file(o.graph));
    const PhaseParams p = params(o);
    return o.domain.empty() ? build_graph(p) : build_graph(p, io::parse_domain(o.domain));
}

ConnectionState base_for(const StokesGraph& g) {
    return base_state(g.params, base_stokes_constants(g.reference, g.params));
}

std::vector<double> beta_or_default(const Options& o) {
    return o.beta.empty() ? std::vector<double>{1, 0, 0, 0} : io::parse_beta(o.beta);
}

std::vector<double> parse_eps(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const double e = io::parse_complex(item).real();
        if (!(e > 0)) throw Error(ErrorKind::InvalidInput, "eps must be positive");
        v.push_back(e);
    }
    if (v.empty()) throw Error(ErrorKind::InvalidInput, "no eps given");
    return v;
}

int cmd_saddles(const Options& o) {
    const PhaseParams p = params(o);
    const cplx z = io::parse_complex(o.z);
    const auto roots = saddle_roots_unchecked(z, p);
    const double gap = min_gap(roots);
    json m{{"z", cj(z)}, {"a", p.a}, {"b", p.b}, {"branches", json::array()}};
    std::string h;
    if (gap < 1e-9) {
        int mult = 1;
        for (int i = 1; i < kBranches; ++i)
            if (std::abs(roots[i] - roots[0]) < 1e-6) ++mult;
        m["degenerate"] = true;
        m["multiplicity"] = mult;
        h = "degenerate: coincident saddles (multiplicity of tau_1: " + std::to_string(mult) + ")\n";
        for (int i = 0; i < kBranches; ++i) {
            h += "tau_" + std::to_string(i + 1) + " = " + io::format_complex(roots[i], 10) + "\n";
            m["branches"].push_back({{"label", i + 1}, {"tau", cj(roots[i])}});
        }
        emit(o, m, h);
        return o.strict ? degenerate : ok;
    }
    const Frame f = frame_at(z, p);
    m["degenerate"] = false;
    for (int i = 0; i < kBranches; ++i) {
        const auto& br = f.branches[i];
        m["branches"].push_back({{"label", br.label}, {"tau", cj(br.tau)}, {"chi", cj(br.chi)}, {"psi0", cj(br.amp0)}});
        char line[256];
        std::snprintf(line, sizeof line, "%d  tau = %s  chi = %s  psi0 = %s\n", br.label,
                      io::format_complex(br.tau, 8).c_str(), io::format_complex(br.chi, 8).c_str(),
                      io::format_complex(br.amp0, 8).c_str());
        h += line;
    }
    emit(o, m, h);
    return ok;
}

int cmd_turning(const Options& o) {
    const PhaseParams p = params(o);
    json m{{"class", coalescence_class(p)}, {"points", json::array()}};
    std::string h = "coalescence class " + std::to_string(coalescence_class(p)) + "\n";
    auto add = [&](const TurningPoint& t) {
        const bool tp = t.kind == TurningKind::turning;
        m["points"].push_back({{"z", cj(t.z)},
                               {"kind", tp ? "turning" : "virtual"},
                               {"pair", {t.i + 1, t.j + 1}},
                               {"multiplicity", t.multiplicity}});
        h += std::string(tp ? "turning " : "virtual ") + io::format_complex(t.z, 12) + "  pair (" +
             std::to_string(t.i + 1) + "," + std::to_string(t.j + 1) + ")\n";
    };
    for (const auto& t : turning_points(p)) add(t);
    for (const auto& t : virtual_turning_points(p)) add(t);
    emit(o, m, h);
    return (o.strict && coalescence_class(p) < 3) ? degenerate : ok;
}

io::Filter parse_filter(const std::string& s) {
    if (s == "all") return io::Filter::all;
    if (s == "active") return io::Filter::active;
    if (s == "relevant") return io::Filter::relevant;
    throw Error(ErrorKind::InvalidInput, "filter must be all, active or relevant");
}

int cmd_graph(const Options& o) {
    const io::Filter filter = parse_filter(o.filter);
    if (filter == io::Filter::relevant && o.beta.empty())
        throw Error(ErrorKind::InvalidInput, "--filter relevant needs --beta");
    const StokesGraph g = load_graph(o);
    if (!o.out.empty()) io::write_atomic(o.out, io::graph_to_json(g));
    if (!o.svg.empty()) {
        std::vector<CurvePiece> pieces;
        if (filter == io::Filter::all) {
            for (int c = 0; c < int(g.curves.size()); ++c)
                pieces.push_back({c, 0, g.curves[c].pts.size() - 1, {true, true}});
        } else {
            std::optional<std::vector<double>> beta;
            if (!o.beta.empty()) beta = io::parse_beta(o.beta);
            pieces = curve_activity(g, base_for(g), beta);
        }
        io::write_atomic(o.svg, io::render_svg(g, pieces, filter));
    }
    json m{{"curves", g.curves.size()}, {"crossings", g.crossings.size()}, {"warnings", g.warnings}};
    std::string h = "curves " + std::to_string(g.curves.size()) + ", crossings " + std::to_string(g.crossings.size()) + "\n";
    for (const auto& w : g.warnings) h += "warning: " + w + "\n";
    emit(o, m, h);
    return (o.strict && !g.warnings.empty()) ? degenerate : ok;
}

json state_json(const ConnectionState& s) {
    json sig = json::array(), S = json::array(), log = json::array();
    for (const auto& f : s.sigma) sig.push_back(f.str());
    for (int i = 0; i < s.stokes.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < s.stokes.size(); ++j) row.push_back(s.stokes(i, j));
        S.push_back(row);
    }
    for (const auto& r : s.log)
        log.push_back({{"kind", r.kind == EventKind::stokes ? "stokes" : "higher"},
                       {"i", r.i + 1},
                       {"j", r.j + 1},
                       {"k", r.k + 1},
                       {"direction", r.direction},
                       {"arclength", r.arclength},
                       {"delta", r.delta}});
    return {{"at", cj(s.at)}, {"sigma", sig}, {"S", S}, {"log", log}};
}

std::string state_text(const ConnectionState& s) {
    std::string h = "at " + io::format_complex(s.at, 10) + "\nsigma:";
    for (const auto& f : s.sigma) h += " " + f.str();
    h += "\nS:\n";
    for (int i = 0; i < s.stokes.size(); ++i) {
        for (int j = 0; j < s.stokes.size(); ++j) {
            char c[16];
            std::snprintf(c, sizeof c, "%3lld", s.stokes(i, j));
            h += c;
        }
        h += "\n";
    }
    for (const auto& r : s.log) {
        char line[160];
        if (r.kind == EventKind::stokes)
            std::snprintf(line, sizeof line, "event %d: l %d>%d dir %+d s=%.6f\n", r.index, r.i + 1, r.j + 1,
                          r.direction, r.arclength);
        else
            std::snprintf(line, sizeof line, "event %d: h %d>%d;%d dir %+d s=%.6f\n", r.index, r.i + 1, r.k + 1,
                          r.j + 1, r.direction, r.arclength);
        h += line;
    }
    return h;
}

int cmd_transport(const Options& o) {
    const StokesGraph g = load_graph(o);
    const ConnectionState base = base_for(g);
    const cplx from = io::parse_complex(o.z0), to = io::parse_complex(o.z);
    ConnectionState start = from == base.at ? base : transport(base, route(base.at, from, g), g);
    start.log.clear();
    const ConnectionState s = transport(start, route(from, to, g), g);
    json m = state_json(s);
    std::string h = state_text(s);
    if (!o.beta.empty()) {
        const auto beta = io::parse_beta(o.beta);
        json v = json::array();
        h += "sigma(beta):";
        for (const auto& f : s.sigma) {
            v.push_back(f.eval(beta));
            h += " " + io::format_real(f.eval(beta), 6);
        }
        h += "\n";
        m["sigma_beta"] = v;
    }
    emit(o, m, h);
    return ok;
}

int cmd_tables(const Options& o) {
    const StokesGraph g = load_graph(o);
    if (!is_reference(g.params))
        throw Error(ErrorKind::InvalidInput, "region fixtures exist only for the reference parameters");
    const ConnectionState base = base_for(g);
    const auto srows = region_tables(g, base, reference_probes(TableKind::stokes));
    const auto prows = region_tables(g, base, reference_probes(TableKind::sigma));
    std::vector<double> beta;
    if (!o.beta.empty()) beta = io::parse_beta(o.beta);
    const std::string s_csv = io::stokes_table_csv(srows);
    const std::string p_csv = io::sigma_table_csv(prows, o.beta.empty() ? nullptr : &beta);
    if (o.out.empty()) {
        std::cout << s_csv << "\n" << p_csv;
    } else {
        io::write_atomic(o.out + "_stokes.csv", s_csv);
        io::write_atomic(o.out + "_sigma.csv", p_csv);
    }
    return ok;
}

int cmd_constants(const Options& o) {
    const PhaseParams p = params(o);
    const Frame f = frame_at(io::parse_complex(o.z), p);
    const auto rows = checks::oracle_cross_check(f, p, o.n_limit);
    json m = json::array();
    std::string h = "pair  adjacency  limit\n";
    for (const auto& r : rows) {
        json row{{"i", r.i + 1}, {"j", r.j + 1}, {"adjacency", r.adjacency}, {"converged", r.converged}};
        char line[200];
        if (r.converged) {
            row["limit"] = cj(r.limit);
            row["error"] = r.error;
            std::snprintf(line, sizeof line, "S%d%d  %+lld  %s (+/- %.1e)\n", r.i + 1, r.j + 1, r.adjacency,
                          io::format_complex(r.limit, 6).c_str(), r.error);
        } else {
            row["note"] = r.note;
            std::snprintf(line, sizeof line, "S%d%d  %+lld  not converged: %s\n", r.i + 1, r.j + 1, r.adjacency,
                          r.note.c_str());
        }
        m.push_back(row);
        h += line;
    }
    emit(o, m, h);
    return ok;
}

int cmd_late_terms(const Options& o) {
    const PhaseParams p = params(o);
    if (o.branch < 1 || o.branch > kBranches) throw Error(ErrorKind::InvalidInput, "--i must be in 1..4");
    const Frame f = frame_at(io::parse_complex(o.z), p);
    const auto t = late_terms(o.n, o.branch - 1, f, p);
    json m = json::array();
    std::string h;
    for (int n = 0; n <= o.n; ++n) {
        m.push_back({{"n", n}, {"psi", cj(t[n])}});
        h += std::to_string(n) + " " + io::format_complex(t[n], 12) + "\n";
    }
    emit(o, m, h);
    return ok;
}

int cmd_eval(const Options& o) {
    const PhysicalMap pm = from_physical(o.x1, o.x2, o.x3);
    const Quadrature q = integrate_swallowtail(pm.z, pm.params, pm.eps);
    json m{{"z", cj(pm.z)}, {"a", pm.params.a}, {"b", pm.params.b}, {"eps", pm.eps}, {"psi", cj(q.value)},
           {"rel_error", q.rel_error}};
    std::string h = "z = " + io::format_complex(pm.z, 10) + "  a = " + io::format_real(pm.params.a, 10) +
                    "  b = " + io::format_real(pm.params.b, 10) + "  eps = " + io::format_real(pm.eps, 10) +
                    "\npsi = " + io::format_complex(q.value, 12) + "  (rel. error " + io::format_real(q.rel_error, 2) +
                    ")\n";
    emit(o, m, h);
    return ok;
}

int cmd_validate(const Options& o) {
    const auto eps_list = parse_eps(o.eps);
    const auto beta = beta_or_default(o);
    const StokesGraph g = load_graph(o);
    const ConnectionState base = base_for(g);
    std::string csv = "check,label,z,eps,numeric,transseries,rel_error,region,pass\n";
    bool all = true;
    auto row = [&](const std::string& check, const checks::ProbeResult& r, double tol) {
        const bool pass = r.rel_error <= tol;
        all = all && pass;
        csv += check + "," + r.label + "," + io::format_complex(r.z, 10) + "," + io::format_real(r.eps, 6) + "," +
               io::format_complex(r.numeric, 12) + "," + io::format_complex(r.series, 12) + "," +
               io::format_real(r.rel_error, 3) + "," + r.region + "," + (pass ? "yes" : "no") + "\n";
    };
    for (double eps : eps_list) {
        row("far-field", checks::far_field_probe(eps), 5 * eps);
        if (is_reference(g.params)) {
            const auto v = checks::transseries_probes(g, base, eps, beta);
            for (const auto& r : v.probes) row("transseries", r, 5 * eps);
            const bool rpass = v.regions >= 3;
            all = all && rpass;
            csv += "regions,sigma(beta),,," + io::format_real(eps, 6) + "," + std::to_string(v.regions) + ",,,," +
                   (rpass ? "yes" : "no") + "\n";
            const auto jc = checks::jump_across_l12(g, base, v, eps, beta);
            const cplx jump = jc.estimate.jump();
            const double err = std::abs(jump - double(jc.expected));
            const bool jpass = jc.expected != 0 && err <= 0.05;
            all = all && jpass;
            csv += "jump,l" + std::to_string(jc.estimate.dominant + 1) + std::to_string(jc.estimate.subdominant + 1) +
                   "," + io::format_complex(jc.at, 10) + "," + io::format_real(eps, 6) + "," +
                   io::format_complex(jump, 8) + "," + std::to_string(jc.expected) + "," + io::format_real(err, 3) +
                   ",," + (jpass ? "yes" : "no") + "\n";
        }
    }
    const auto loops = checks::loop_identity(g, base, o.seed, o.loops);
    const bool lpass = loops.failures == 0 && loops.antisymmetry_failures == 0;
    all = all && lpass;
    csv += "loop-identity,seed " + std::to_string(o.seed) + ",,,," + std::to_string(loops.loops) + " loops (" +
           std::to_string(loops.winding) + " winding)," + std::to_string(loops.failures) + " failed (" +
           std::to_string(loops.winding_failures) + " winding; " + std::to_string(loops.errors) + " threw),,," +
           (lpass ? "yes" : "no") + "\n";
    const auto xs = checks::crossing_consistency(g, base);
    const bool xpass = xs.failures == 0;
    all = all && xpass;
    csv += "crossing-loops,,,,," + std::to_string(xs.crossings) + " sites," + std::to_string(xs.failures) + ",," +
           (xpass ? "yes" : "no") + "\n";
    for (const auto& r : checks::oracle_cross_check(g.reference, g.params)) {
        const bool agree = !r.converged || std::abs(r.limit - double(r.adjacency)) < 1e-2;
        all = all && agree;
        csv += "oracle,S" + std::to_string(r.i + 1) + std::to_string(r.j + 1) + ",,,," +
               std::to_string(r.adjacency) + "," +
               (r.converged ? io::format_complex(r.limit, 8) + "," + io::format_real(r.error, 3) : "not converged,") +
               ",," + (agree ? "yes" : "no") + "\n";
    }
    output(o, csv);
    return all ? ok : numerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stokes geometry, transport and validation for the swallowtail integral"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* c) {
        c->add_option("--a", o.a, "phase parameter a");
        c->add_option("--b", o.b, "phase parameter b");
        c->add_flag("--machine", o.machine, "structured JSON output");
        c->add_flag("--strict", o.strict, "exit 3 on degeneracy warnings");
    };
    auto graph_opts = [&](CLI::App* c) {
        c->add_option("--graph", o.graph, "graph file to load instead of tracing");
        c->add_option("--domain", o.domain, "x0,x1,y0,y1");
    };
    auto* saddles = app.add_subcommand("saddles", "saddle points, singulants and leading amplitudes at z");
    common(saddles);
    saddles->add_option("--z", o.z, "point RE+IMi");
    auto* turning = app.add_subcommand("turning-points", "turning and virtual turning points");
    common(turning);
    auto* graph = app.add_subcommand("graph", "trace the Stokes graph");
    common(graph);
    graph_opts(graph);
    graph->add_option("--out", o.out, "graph JSON path");
    graph->add_option("--svg", o.svg, "SVG path");
    graph->add_option("--filter", o.filter, "all|active|relevant");
    graph->add_option("--beta", o.beta, "b1,b2,b3,b4");
    auto* constants = app.add_subcommand("constants", "base Stokes constants by adjacency and late terms");
    common(constants);
    constants->add_option("--z", o.z, "point RE+IMi");
    constants->add_option("--n", o.n_limit, "largest late-term order (at least 20)");
    auto* trans = app.add_subcommand("transport", "transport the connection state between two points");
    common(trans);
    graph_opts(trans);
    trans->add_option("--z0", o.z0, "start point");
    trans->add_option("--z", o.z, "end point");
    trans->add_option("--beta", o.beta, "b1,b2,b3,b4");
    auto* tables = app.add_subcommand("tables", "region tables of Stokes constants and sigma");
    common(tables);
    graph_opts(tables);
    tables->add_option("--beta", o.beta, "b1,b2,b3,b4 (symbolic if omitted)");
    tables->add_option("--out", o.out, "output prefix for <prefix>_stokes.csv and <prefix>_sigma.csv");
    auto* validate = app.add_subcommand("validate", "integral, transseries and property checks");
    common(validate);
    graph_opts(validate);
    validate->add_option("--eps", o.eps, "comma-separated eps values");
    validate->add_option("--beta", o.beta, "b1,b2,b3,b4");
    validate->add_option("--seed", o.seed, "seed of the loop property run");
    validate->add_option("--loops", o.loops, "number of random loops");
    validate->add_option("--out", o.out, "CSV report path");
    auto* late = app.add_subcommand("late-terms", "late-term coefficients psi_n of one branch");
    common(late);
    late->add_option("--z", o.z, "point RE+IMi");
    late->add_option("--i", o.branch, "branch label 1..4");
    late->add_option("--n", o.n, "largest order");
    auto* eval = app.add_subcommand("eval", "integral in physical variables x1, x2, x3");
    eval->add_option("--x1", o.x1)->required();
    eval->add_option("--x2", o.x2)->required();
    eval->add_option("--x3", o.x3)->required();
    eval->add_flag("--machine", o.machine, "structured JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid;
    }
    try {
        if (*saddles) return cmd_saddles(o);
        if (*turning) return cmd_turning(o);
        if (*graph) return cmd_graph(o);
        if (*constants) return cmd_constants(o);
        if (*trans) return cmd_transport(o);
        if (*tables) return cmd_tables(o);
        if (*validate) return cmd_validate(o);
        if (*late) return cmd_late_terms(o);
        if (*eval) return cmd_eval(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::InvalidInput:
        case ErrorKind::IndexError:
        case ErrorKind::FormatVersion:
        case ErrorKind::ZeroX1: return invalid;
        default: return numerical;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return numerical;
    }
    return invalid;
}
