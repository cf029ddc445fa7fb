#include "io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <sstream>

namespace atlas::io {

using nlohmann::json;

namespace {

double parse_real(const std::string& s) {
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput, "not a number: '" + s + "'");
    }
    if (used != s.size()) throw Error(ErrorKind::InvalidInput, "not a number: '" + s + "'");
    return v;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }
cplx from_cjson(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

const char* kind_name(CurveKind k) { return k == CurveKind::ordinary ? "ordinary" : "higher"; }
const char* crossing_name(CrossingKind k) {
    switch (k) {
    case CrossingKind::stokes: return "stokes";
    case CrossingKind::higher: return "higher";
    default: return "mixed";
    }
}

}  // namespace

cplx parse_complex(const std::string& raw) {
    // spaces may surround the sign but not split a number
    std::string s;
    bool gap = false;
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            gap = !s.empty();
            continue;
        }
        if (gap && c != '+' && c != '-' && s.back() != '+' && s.back() != '-')
            throw Error(ErrorKind::InvalidInput, "cannot parse complex literal '" + raw + "'");
        gap = false;
        s += c;
    }
    static const std::string num = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex full("^([+-]?" + num + ")([+-](?:" + num + ")?)i$");
    static const std::regex imag("^([+-]?(?:" + num + ")?)i$");
    static const std::regex real("^[+-]?" + num + "$");
    std::smatch m;
    auto coef = [](const std::string& c) {
        if (c.empty() || c == "+") return 1.0;
        if (c == "-") return -1.0;
        return parse_real(c);
    };
    if (std::regex_match(s, m, full)) return {parse_real(m[1]), coef(m[2])};
    if (std::regex_match(s, m, imag)) return {0.0, coef(m[1])};
    if (std::regex_match(s, real)) return {parse_real(s), 0.0};
    throw Error(ErrorKind::InvalidInput, "cannot parse complex literal '" + raw + "'");
}

std::string format_real(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x == 0.0 ? 0.0 : x);
    return buf;
}

std::string format_complex(cplx z, int digits) {
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    std::string out = format_real(z.real(), digits);
    out += std::signbit(im) ? "-" : "+";
    return out + format_real(std::abs(im), digits) + "i";
}

Domain parse_domain(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_real(item));
    if (v.size() != 4) throw Error(ErrorKind::InvalidInput, "domain needs x0,x1,y0,y1");
    Domain d{v[0], v[1], v[2], v[3]};
    if (d.empty()) throw Error(ErrorKind::InvalidInput, "empty domain rectangle");
    return d;
}

std::vector<double> parse_beta(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_real(item));
    if (v.size() != size_t(kBranches)) throw Error(ErrorKind::InvalidInput, "beta needs four values");
    return v;
}

std::string graph_to_json(const StokesGraph& g) {
    json j;
    j["format_version"] = kGraphFormatVersion;
    j["params"] = {{"a", g.params.a}, {"b", g.params.b}};
    j["domain"] = {g.domain.x0, g.domain.x1, g.domain.y0, g.domain.y1};
    json tps = json::array();
    for (const auto& t : g.turning)
        tps.push_back({{"z", cjson(t.z)},
                       {"i", t.i},
                       {"j", t.j},
                       {"kind", t.kind == TurningKind::turning ? "turning" : "virtual"},
                       {"multiplicity", t.multiplicity}});
    j["turning"] = tps;
    json curves = json::array();
    for (const auto& c : g.curves) {
        json pts = json::array(), nrm = json::array(), t0 = json::array();
        for (auto z : c.pts) pts.push_back(cjson(z));
        for (auto z : c.normals) nrm.push_back(cjson(z));
        for (auto z : c.taus.front()) t0.push_back(cjson(z));
        curves.push_back({{"kind", kind_name(c.kind)},
                          {"i", c.i},
                          {"j", c.j},
                          {"k", c.k},
                          {"source", c.source},
                          {"source_kind", c.source_kind == TurningKind::turning ? "turning" : "virtual"},
                          {"tau0", t0},
                          {"points", pts},
                          {"normals", nrm}});
    }
    j["curves"] = curves;
    json xs = json::array();
    for (const auto& x : g.crossings)
        xs.push_back({{"point", cjson(x.point)}, {"curves", x.curves}, {"kind", crossing_name(x.kind)}});
    j["crossings"] = xs;
    json chis = json::array();
    for (int i = 0; i < kBranches; ++i) chis.push_back(cjson(g.reference.chi(i)));
    j["reference"] = {{"z", cjson(g.reference.z)}, {"chi", chis}};
    j["warnings"] = g.warnings;
    return j.dump() + "\n";
}

StokesGraph graph_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("graph file is not JSON: ") + e.what());
    }
    if (!j.contains("format_version") || j["format_version"] != kGraphFormatVersion)
        throw Error(ErrorKind::FormatVersion, "unsupported graph format version");
    try {
        StokesGraph g;
        g.params = {j["params"]["a"].get<double>(), j["params"]["b"].get<double>()};
        const auto& d = j["domain"];
        g.domain = {d[0].get<double>(), d[1].get<double>(), d[2].get<double>(), d[3].get<double>()};
        for (const auto& t : j["turning"])
            g.turning.push_back({from_cjson(t["z"]), t["i"].get<int>(), t["j"].get<int>(),
                                 t["kind"] == "turning" ? TurningKind::turning : TurningKind::virtual_,
                                 t["multiplicity"].get<int>()});
        for (const auto& c : j["curves"]) {
            StokesCurve sc;
            sc.kind = c["kind"] == "ordinary" ? CurveKind::ordinary : CurveKind::higher;
            sc.i = c["i"].get<int>();
            sc.j = c["j"].get<int>();
            sc.k = c["k"].get<int>();
            sc.source = c["source"].get<int>();
            sc.source_kind = c["source_kind"] == "turning" ? TurningKind::turning : TurningKind::virtual_;
            for (const auto& z : c["points"]) sc.pts.push_back(from_cjson(z));
            for (const auto& z : c["normals"]) sc.normals.push_back(from_cjson(z));
            if (sc.pts.empty() || sc.normals.size() != sc.pts.size())
                throw Error(ErrorKind::InvalidInput, "curve polyline and normals differ in length");
            std::array<cplx, kBranches> t0;
            for (int q = 0; q < kBranches; ++q) t0[q] = from_cjson(c["tau0"].at(q));
            Frame f = make_frame(sc.pts.front(), t0, g.params);
            sc.taus.push_back(t0);
            for (size_t v = 1; v < sc.pts.size(); ++v) {
                f = advance(f, sc.pts[v], g.params);
                sc.taus.push_back(f.taus());
            }
            g.curves.push_back(std::move(sc));
        }
        for (const auto& x : j["crossings"]) {
            const std::string k = x["kind"];
            g.crossings.push_back({from_cjson(x["point"]), x["curves"].get<std::vector<int>>(),
                                   k == "stokes"   ? CrossingKind::stokes
                                   : k == "higher" ? CrossingKind::higher
                                                   : CrossingKind::mixed});
        }
        g.reference = reference_frame(g.params);
        g.warnings = j["warnings"].get<std::vector<std::string>>();
        return g;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("malformed graph file: ") + e.what());
    }
}

std::string stokes_table_csv(const std::vector<RegionRow>& rows) {
    std::string out = "region,z,S12,S13,S14,S23,S24,S34\n";
    for (const auto& r : rows) {
        out += r.label + "," + format_complex(r.z, 10);
        for (int i = 0; i < kBranches; ++i)
            for (int j = i + 1; j < kBranches; ++j) out += "," + std::to_string(r.S(i, j));
        out += "\n";
    }
    return out;
}

std::string sigma_table_csv(const std::vector<RegionRow>& rows, const std::vector<double>* beta) {
    std::string out = "region,z,sigma1,sigma2,sigma3,sigma4\n";
    for (const auto& r : rows) {
        out += r.label + "," + format_complex(r.z, 10);
        for (const auto& s : r.sigma) out += "," + (beta ? format_real(s.eval(*beta)) : s.str());
        out += "\n";
    }
    return out;
}

std::string render_svg(const StokesGraph& g, const std::vector<CurvePiece>& pieces, Filter filter) {
    const double W = 800, H = W * (g.domain.y1 - g.domain.y0) / (g.domain.x1 - g.domain.x0);
    auto X = [&](cplx z) { return (z.real() - g.domain.x0) / (g.domain.x1 - g.domain.x0) * W; };
    auto Y = [&](cplx z) { return (g.domain.y1 - z.imag()) / (g.domain.y1 - g.domain.y0) * H; };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << format_real(H, 8)
      << "\" viewBox=\"0 0 " << W << " " << format_real(H, 8) << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& p : pieces) {
        if (filter == Filter::active && !p.activity.active) continue;
        if (filter == Filter::relevant && !p.activity.relevant) continue;
        const auto& c = g.curves[p.curve];
        const bool ord = c.kind == CurveKind::ordinary;
        o << "<polyline fill=\"none\" stroke=\"" << (ord ? "black" : "#555") << "\" stroke-width=\""
          << (ord ? 2 : 1) << "\" data-curve=\"" << p.curve << "\" points=\"";
        const size_t step = std::max<size_t>(1, (p.end - p.begin) / 400);
        for (size_t v = p.begin; v <= p.end; v += step) o << format_real(X(c.pts[v]), 7) << "," << format_real(Y(c.pts[v]), 7) << " ";
        o << format_real(X(c.pts[p.end]), 7) << "," << format_real(Y(c.pts[p.end]), 7) << "\"/>\n";
    }
    for (const auto& t : g.turning)
        o << "<circle cx=\"" << format_real(X(t.z), 7) << "\" cy=\"" << format_real(Y(t.z), 7)
          << "\" r=\"5\" stroke=\"black\" fill=\"" << (t.kind == TurningKind::turning ? "#333" : "#ccc") << "\"/>\n";
    o << "</svg>\n";
    return o.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
        out << content;
        if (!out.flush()) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace atlas::io
