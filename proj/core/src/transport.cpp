#include "atlas/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace atlas {

StokesMatrix::StokesMatrix(std::initializer_list<std::initializer_list<long long>> rows) : n_(int(rows.size())) {
    for (const auto& r : rows) {
        if (int(r.size()) != n_) throw Error(ErrorKind::InvalidInput, "Stokes matrix must be square");
        e_.insert(e_.end(), r.begin(), r.end());
    }
}

size_t StokesMatrix::idx(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw Error(ErrorKind::IndexError, "Stokes matrix index out of range");
    return size_t(i) * n_ + size_t(j);
}

bool StokesMatrix::antisymmetric() const {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if ((*this)(i, j) != -(*this)(j, i)) return false;
    return true;
}

bool LinearForm::zero() const {
    return std::all_of(c.begin(), c.end(), [](long long v) { return v == 0; });
}

double LinearForm::eval(const std::vector<double>& beta) const {
    double s = 0;
    for (size_t k = 0; k < c.size() && k < beta.size(); ++k) s += double(c[k]) * beta[k];
    return s;
}

std::string LinearForm::str() const {
    std::ostringstream o;
    bool first = true;
    for (size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        const long long a = std::llabs(c[k]);
        if (c[k] < 0) o << "-";
        else if (!first) o << "+";
        if (a != 1) o << a << "*";
        o << "b" << k + 1;
        first = false;
    }
    return first ? "0" : o.str();
}

SigmaVector symbolic_sigma(int n) {
    SigmaVector s(n);
    for (int i = 0; i < n; ++i) {
        s[i].c.assign(n, 0);
        s[i].c[i] = 1;
    }
    return s;
}

IntMatrix stokes_automorphism_matrix(const StokesMatrix& S, int i, int j) {
    const int n = S.size();
    if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw Error(ErrorKind::IndexError, "invalid Stokes line labels");
    IntMatrix m(n, std::vector<long long>(n, 0));
    for (int k = 0; k < n; ++k) m[k][k] = 1;
    m[j][i] = S(i, j);
    return m;
}

long long determinant(const IntMatrix& m) {
    const int n = int(m.size());
    if (n == 0) return 1;
    if (n == 1) return m[0][0];
    long long d = 0;
    for (int c = 0; c < n; ++c) {
        if (m[0][c] == 0) continue;
        IntMatrix sub;
        for (int r = 1; r < n; ++r) {
            std::vector<long long> row;
            for (int k = 0; k < n; ++k)
                if (k != c) row.push_back(m[r][k]);
            sub.push_back(row);
        }
        d += (c % 2 ? -1 : 1) * m[0][c] * determinant(sub);
    }
    return d;
}

ConnectionState base_state(const PhaseParams& p, const StokesMatrix& S) {
    ConnectionState s;
    s.frame = reference_frame(p);
    s.at = s.frame.z;
    s.stokes = S;
    s.sigma = symbolic_sigma(S.size());
    return s;
}

namespace {

void check_labels(const ConnectionState& s, std::initializer_list<int> ids) {
    const int n = s.stokes.size();
    for (int a : ids)
        if (a < 0 || a >= n) throw Error(ErrorKind::IndexError, "branch label out of range");
    for (auto a = ids.begin(); a != ids.end(); ++a)
        for (auto b = a + 1; b != ids.end(); ++b)
            if (*a == *b) throw Error(ErrorKind::IndexError, "branch labels must be distinct");
}

}  // namespace

void apply_stokes(ConnectionState& s, int i, int j, int direction, double arclength) {
    check_labels(s, {i, j});
    const long long m = s.stokes(i, j);
    if (m != 0)
        for (size_t k = 0; k < s.sigma[j].c.size(); ++k) s.sigma[j].c[k] += direction * m * s.sigma[i].c[k];
    s.log.push_back({int(s.log.size()), EventKind::stokes, i, j, -1, direction, arclength, m});
}

void apply_higher(ConnectionState& s, int i, int k, int j, int direction, double arclength) {
    check_labels(s, {i, j, k});
    const long long m = s.stokes(i, j) * s.stokes(j, k);
    s.stokes(i, k) += direction * m;
    if (s.antisymmetric) s.stokes(k, i) = -s.stokes(i, k);
    s.log.push_back({int(s.log.size()), EventKind::higher, i, j, k, direction, arclength, m});
}

ConnectionState replay(ConnectionState base, const std::vector<LogRecord>& log) {
    for (const auto& r : log) {
        if (r.kind == EventKind::stokes) apply_stokes(base, r.i, r.j, r.direction, r.arclength);
        else apply_higher(base, r.i, r.k, r.j, r.direction, r.arclength);
    }
    return base;
}

namespace {

void apply_event(ConnectionState& s, const CrossingEvent& e) {
    if (e.k < 0) apply_stokes(s, e.i, e.j, e.direction, e.arclength);
    else apply_higher(s, e.i, e.k, e.j, e.direction, e.arclength);
}

bool same_values(const ConnectionState& a, const ConnectionState& b) {
    return a.sigma == b.sigma && a.stokes == b.stokes;
}

// Apply a batch of events at one arclength; any order must give the same result.
void apply_batch(ConnectionState& s, std::vector<CrossingEvent> batch) {
    if (batch.size() == 1) {
        apply_event(s, batch[0]);
        return;
    }
    std::sort(batch.begin(), batch.end(), [](const CrossingEvent& x, const CrossingEvent& y) {
        return std::make_tuple(x.k >= 0 ? 0 : 1, x.curve) < std::make_tuple(y.k >= 0 ? 0 : 1, y.curve);
    });
    ConnectionState ref = s;
    for (const auto& e : batch) apply_event(ref, e);
    std::vector<int> order(batch.size());
    for (size_t q = 0; q < order.size(); ++q) order[q] = int(q);
    while (std::next_permutation(order.begin(), order.end())) {
        ConnectionState t = s;
        for (int q : order) apply_event(t, batch[q]);
        if (!same_values(t, ref))
            throw Error(ErrorKind::SimultaneousEvents, "non-commuting events at the same arclength; re-route");
    }
    s = std::move(ref);
}

}  // namespace

ConnectionState transport(const ConnectionState& s, const std::vector<cplx>& path, const StokesGraph& g) {
    if (path.empty() || std::abs(path.front() - s.at) > 1e-12 * std::max(1.0, std::abs(s.at)))
        throw Error(ErrorKind::InvalidInput, "path must start at the state's base point");
    ConnectionState out = s;
    const auto events = path_crossings(path, g, s.frame);
    for (size_t a = 0; a < events.size();) {
        size_t b = a + 1;
        // Curves within tracing error of each other are one line; their events
        // form a batch instead of an order fixed by roundoff.
        while (b < events.size() && events[b].arclength - events[a].arclength <= 1e-6) ++b;
        apply_batch(out, std::vector<CrossingEvent>(events.begin() + a, events.begin() + b));
        a = b;
    }
    Frame f = s.frame;
    for (size_t q = 1; q < path.size(); ++q) f = advance(f, path[q], g.params);
    out.frame = f;
    out.at = path.back();
    return out;
}

ConnectionState relabel(const ConnectionState& s, const Frame& ref) {
    const auto perm = match_labels(s.frame.taus(), ref.taus());
    std::array<long long, kBranches> sign{};
    for (int i = 0; i < kBranches; ++i)
        sign[i] = (s.frame.amp0(i) / ref.amp0(perm[i])).real() < 0 ? -1 : 1;
    ConnectionState out = s;
    out.frame = ref;
    const int n = s.stokes.size();
    for (int i = 0; i < n; ++i) {
        LinearForm f = s.sigma[i];
        for (auto& c : f.c) c *= sign[i];
        out.sigma[perm[i]] = f;
        for (int j = 0; j < n; ++j) out.stokes(perm[i], perm[j]) = sign[i] * sign[j] * s.stokes(i, j);
    }
    return out;
}

namespace {

struct Obstacle {
    cplx c;
    double s;  // projection parameter along the segment
};

std::vector<cplx> obstacles(const StokesGraph& g) {
    std::vector<cplx> o;
    for (const auto& c : g.crossings) o.push_back(c.point);
    for (const auto& t : g.turning) o.push_back(t.z);
    return o;
}

std::vector<cplx> detour_path(cplx a, cplx b, const std::vector<cplx>& obs, double dsafe, double radius, int side) {
    const cplx d = b - a;
    const double len = std::abs(d);
    if (len == 0) return {a, b};
    const cplx u = d / len;
    std::vector<Obstacle> near;
    for (auto c : obs) {
        const double t = ((c - a) * std::conj(u)).real();
        const double off = ((c - a) * std::conj(u)).imag();
        if (t > -dsafe && t < len + dsafe && std::abs(off) < radius) near.push_back({c, t});
    }
    std::sort(near.begin(), near.end(), [](const Obstacle& x, const Obstacle& y) { return x.s < y.s; });
    std::vector<cplx> path{a};
    double last = 0;
    for (const auto& o : near) {
        const double t0 = o.s - radius, t1 = o.s + radius;
        if (t0 <= last || t1 >= len)
            throw Error(ErrorKind::Unroutable, "endpoint too close to a crossing or turning point");
        const cplx p = a + o.s * u;
        path.push_back(a + t0 * u);
        constexpr int m = 32;
        for (int q = 1; q < m; ++q) {
            const double th = std::numbers::pi * (1.0 - double(q) / m);
            path.push_back(p + radius * u * cplx(std::cos(th), side * std::sin(th)));
        }
        path.push_back(a + t1 * u);
        last = t1;
    }
    path.push_back(b);
    return path;
}

bool admissible(const std::vector<cplx>& path, const std::vector<cplx>& obs, double dsafe) {
    for (size_t s = 0; s + 1 < path.size(); ++s) {
        const cplx d = path[s + 1] - path[s];
        const double l2 = std::norm(d);
        for (auto c : obs) {
            double t = l2 > 0 ? ((c - path[s]) * std::conj(d)).real() / l2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            if (std::abs(c - (path[s] + t * d)) < dsafe) return false;
        }
    }
    return true;
}

}  // namespace

std::vector<cplx> route(cplx a, cplx b, const StokesGraph& g) {
    const double dsafe = safe_distance(g);
    const auto obs = obstacles(g);
    for (double radius = 2 * dsafe; radius <= 64 * dsafe; radius *= 2)
        for (int side : {1, -1}) {
            try {
                auto p = detour_path(a, b, obs, dsafe, radius, side);
                if (admissible(p, obs, dsafe)) return p;
            } catch (const Error&) {
            }
        }
    throw Error(ErrorKind::Unroutable, "no admissible path at the configured safety margin");
}

Activity classify(CurveKind kind, int i, int j, int k, const ConnectionState& s,
                  const std::optional<std::vector<double>>& beta) {
    Activity a;
    if (kind == CurveKind::ordinary) {
        a.active = s.stokes(i, j) != 0;
        a.relevant = a.active && (beta ? s.sigma[i].eval(*beta) != 0.0 : !s.sigma[i].zero());
    } else {
        a.active = s.stokes(i, j) * s.stokes(j, k) != 0;
        a.relevant = a.active;
    }
    return a;
}

std::vector<CurvePiece> curve_activity(const StokesGraph& g, const ConnectionState& base,
                                       const std::optional<std::vector<double>>& beta) {
    std::vector<CurvePiece> out;
    const double dsafe = safe_distance(g);
    for (int c = 0; c < int(g.curves.size()); ++c) {
        const auto& C = g.curves[c];
        std::vector<size_t> cuts{0};
        for (const auto& x : g.crossings) {
            if (std::find(x.curves.begin(), x.curves.end(), c) == x.curves.end()) continue;
            size_t best = 0;
            for (size_t v = 0; v < C.pts.size(); ++v)
                if (std::abs(C.pts[v] - x.point) < std::abs(C.pts[best] - x.point)) best = v;
            cuts.push_back(best);
        }
        cuts.push_back(C.pts.size() - 1);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (size_t q = 0; q + 1 < cuts.size(); ++q) {
            CurvePiece piece{c, cuts[q], cuts[q + 1], {}};
            // probe a vertex away from the piece ends, just off the curve
            size_t v = (cuts[q] + cuts[q + 1]) / 2;
            const cplx z = C.pts[v] - 2 * dsafe * C.normals[v];
            try {
                ConnectionState s = transport(base, route(base.at, z, g), g);
                auto perm = match_labels(C.taus[v], s.frame.taus());
                piece.activity = classify(C.kind, perm[C.i], perm[C.j], C.k >= 0 ? perm[C.k] : -1, s, beta);
            } catch (const Error&) {
                piece.activity = {true, true};
            }
            out.push_back(piece);
        }
    }
    return out;
}

std::vector<RegionRow> region_tables(const StokesGraph& g, const ConnectionState& base,
                                     const std::vector<Probe>& probes) {
    std::vector<RegionRow> rows;
    for (const auto& pr : probes) {
        ConnectionState s = transport(base, route(base.at, pr.z, g), g);
        rows.push_back({pr.label, pr.z, s.stokes, s.sigma});
    }
    return rows;
}

namespace {

constexpr cplx kTripleCrossing{-0.692386092, 1.434376406};
constexpr cplx kSixfoldCrossing{5.176963403521379, 0.0};

cplx polar_deg(cplx c, double r, double deg) { return c + std::polar(r, deg * std::numbers::pi / 180.0); }

}  // namespace

std::vector<Probe> reference_probes(TableKind kind) {
    std::vector<Probe> p;
    if (kind == TableKind::stokes) {
        p = {{"a1", {2.4, 0.3}}, {"a2", {0.8, 2.9}}, {"a3", {-2.6, 1.7}}, {"a4", {0.8, -2.9}}, {"a5", {-2.6, -2.3}}};
        // c1 is the sector west of the crossing, then clockwise.
        const double c[] = {180.0, 100.53, 97.4, 94.1, 0.0, 265.9, 262.6, 259.5};
        for (int q = 0; q < 8; ++q) p.push_back({"c" + std::to_string(q + 1), polar_deg(kSixfoldCrossing, 0.6, c[q])});
    } else {
        const double a[] = {0.0, 60.0, 140.0, 176.0, 245.0};
        for (int q = 0; q < 5; ++q) p.push_back({"a" + std::to_string(q + 1), polar_deg(kTripleCrossing, 0.05, a[q])});
        const double b[] = {150.0, 90.0, 38.0, 8.0, 352.0, 320.0, 285.0, 210.0};
        for (int q = 0; q < 8; ++q) p.push_back({"b" + std::to_string(q + 1), polar_deg(kSixfoldCrossing, 0.3, b[q])});
    }
    return p;
}

std::vector<cplx> reference_b_cycle() {
    std::vector<cplx> path;
    for (int q = 0; q <= 720; ++q) path.push_back(polar_deg(kSixfoldCrossing, 0.3, 150.0 - 360.0 * q / 720));
    return path;
}

}  // namespace atlas
