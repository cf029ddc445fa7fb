#include "atlas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "segment_index.hpp"

namespace atlas {

namespace {

constexpr cplx I{0.0, 1.0};

struct Landing {
    // Signed quantity that changes sign where the trace should end.
    std::function<double(cplx)> q;
};

class Tracer {
public:
    Tracer(CurveKind kind, int i, int j, int k, const PhaseParams& p, const Domain& d, const TraceOptions& opt,
           std::vector<cplx> stops, cplx source)
        : kind_(kind), i_(i), j_(j), k_(k), p_(p), d_(d), opt_(opt), stops_(std::move(stops)), source_(source) {}

    Defining value(const Frame& f) const {
        return kind_ == CurveKind::ordinary ? ordinary_value(f, i_, j_) : higher_value(f, i_, k_, j_);
    }

    StokesCurve run(const Frame& seed) const {
        StokesCurve c;
        c.kind = kind_;
        c.i = i_;
        c.j = j_;
        c.k = kind_ == CurveKind::ordinary ? -1 : k_;
        push(c, seed);
        Frame f = seed;
        double h = opt_.initial_step;
        bool left_source = false;
        while (c.pts.size() < opt_.max_vertices) {
            if (!left_source && std::abs(f.z - source_) > 10.0 * stop_r_) left_source = true;
            const double dstop = nearest_stop(f.z, left_source);
            double hs = h;
            if (dstop < INFINITY) hs = std::min(hs, std::max(0.5 * dstop, 0.25 * stop_r_));
            Frame nf;
            if (!step(f, hs, nf)) {
                if (h <= opt_.min_step) break;
                h = std::max(opt_.min_step, 0.5 * h);
                continue;
            }
            const double turn = turn_angle(f, nf);
            if (hs * turn / 8.0 > opt_.sag_tol && hs > opt_.min_step) {
                h = std::max(opt_.min_step, 0.5 * hs);
                continue;
            }
            if (!d_.contains(nf.z)) {
                Frame b;
                if (land(f, hs, [this](cplx z) { return outside(z); }, b)) push(c, b);
                break;
            }
            int s = entered_stop(nf, left_source);
            if (s >= 0) {
                const cplx zs = stops_[s];
                Frame b;
                if (land(f, hs, [this, zs](cplx z) { return stop_r_ - std::abs(z - zs); }, b)) push(c, b);
                break;
            }
            const Defining v = value(nf);
            if (v.g.real() < -1e-10 * std::max(1.0, std::abs(v.g))) break;
            push(c, nf);
            f = nf;
            if (hs * turn / 8.0 < 0.25 * opt_.sag_tol) h = std::min(opt_.max_step, 1.5 * hs);
            else h = hs;
        }
        return c;
    }

    double stop_r_ = 1e-3;

private:
    void push(StokesCurve& c, const Frame& f) const {
        const Defining v = value(f);
        c.pts.push_back(f.z);
        c.taus.push_back(f.taus());
        c.normals.push_back(I * std::conj(v.dg) / std::abs(v.dg));
    }

    double outside(cplx z) const {
        return std::max({d_.x0 - z.real(), z.real() - d_.x1, d_.y0 - z.imag(), z.imag() - d_.y1});
    }

    double nearest_stop(cplx z, bool left_source) const {
        double best = INFINITY;
        for (const auto& s : stops_) {
            if (!left_source && s == source_) continue;
            best = std::min(best, std::abs(z - s));
        }
        return best;
    }

    bool involved(const Frame& f) const {
        int ids[3] = {i_, j_, k_};
        const int n = kind_ == CurveKind::ordinary ? 2 : 3;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (std::abs(f.chi(ids[a]) - f.chi(ids[b])) < 50.0 * stop_r_) return true;
        return false;
    }

    int entered_stop(const Frame& f, bool left_source) const {
        for (int s = 0; s < int(stops_.size()); ++s) {
            if (!left_source && stops_[s] == source_) continue;
            if (std::abs(f.z - stops_[s]) < stop_r_ && involved(f)) return s;
        }
        return -1;
    }

    double turn_angle(const Frame& a, const Frame& b) const {
        const cplx da = std::conj(value(a).dg), db = std::conj(value(b).dg);
        return std::abs(std::arg(db / da));
    }

    bool step(const Frame& f, double h, Frame& out) const {
        try {
            Defining v = value(f);
            double m = std::abs(v.dg);
            if (m < 1e-10) throw Error(ErrorKind::DegenerateTangent, "vanishing tangent");
            Frame g = advance(f, f.z + h * std::conj(v.dg) / m, p_);
            for (int it = 0; it < opt_.max_corrector; ++it) {
                v = value(g);
                m = std::abs(v.dg);
                if (m < 1e-10) return false;
                const double delta = -v.g.imag() / m;
                g = advance(g, g.z + delta * I * std::conj(v.dg) / m, p_);
                if (std::abs(delta) <= 1e-14 * std::max(1.0, std::abs(g.z))) {
                    out = g;
                    const Defining w = value(g);
                    return std::abs(w.g.imag()) <= 1e-11 * std::max(1.0, std::abs(w.g));
                }
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::DegenerateTangent) throw;
        }
        return false;
    }

    // Bisect the step length so the corrected point satisfies q = 0.
    bool land(const Frame& f, double h, const std::function<double(cplx)>& q, Frame& out) const {
        double lo = 0.0, hi = h;
        Frame best;
        bool have = false;
        for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            Frame g;
            if (!step(f, mid, g)) {
                hi = mid;
                continue;
            }
            const double qv = q(g.z);
            if (qv > 0) {
                hi = mid;
                best = g;
                have = true;
            } else {
                lo = mid;
            }
            if (std::abs(qv) < 1e-12) break;
        }
        if (have) out = best;
        return have;
    }

    CurveKind kind_;
    int i_, j_, k_;
    const PhaseParams& p_;
    const Domain& d_;
    const TraceOptions& opt_;
    std::vector<cplx> stops_;
    cplx source_;
};

std::vector<cplx> stop_points(const PhaseParams& p) {
    std::vector<cplx> s;
    for (const auto& t : turning_points(p)) s.push_back(t.z);
    for (const auto& t : virtual_turning_points(p)) s.push_back(t.z);
    return s;
}

StokesCurve trace_impl(CurveKind kind, int i, int j, int k, const Frame& seed, const PhaseParams& p, const Domain& d,
                       const TraceOptions& opt, const std::vector<cplx>& stops, cplx source) {
    Tracer t(kind, i, j, k, p, d, opt, stops, source);
    return t.run(seed);
}

cplx nearest(const std::vector<cplx>& pts, cplx z) {
    cplx best = pts.empty() ? z : pts[0];
    for (auto s : pts)
        if (std::abs(s - z) < std::abs(best - z)) best = s;
    return best;
}

Frame canonical_on_circle(cplx z0, double r, const PhaseParams& p) {
    for (int k = 0; k < 8; ++k) {
        try {
            return frame_at(z0 + r * std::polar(1.0, 0.1372 + 0.25 * std::numbers::pi * k), p);
        } catch (const Error&) {
        }
    }
    throw Error(ErrorKind::LabelAmbiguity, "no canonical frame near source");
}

std::array<cplx, kBranches> lerp_taus(const StokesCurve& c, int s, double u) {
    std::array<cplx, kBranches> r;
    for (int a = 0; a < kBranches; ++a) r[a] = c.taus[s][a] + u * (c.taus[s + 1][a] - c.taus[s][a]);
    return r;
}

}  // namespace

double Domain::diameter() const { return std::hypot(x1 - x0, y1 - y0); }

std::shared_ptr<const SegmentIndex> StokesGraph::index() const {
    if (!index_) index_ = std::make_shared<SegmentIndex>(curves, domain);
    return index_;
}

Defining ordinary_value(const Frame& f, int i, int j) {
    return {f.chi(j) - f.chi(i), f.tau(j) - f.tau(i)};
}

Defining higher_value(const Frame& f, int i, int k, int j) {
    const cplx num = f.chi(k) - f.chi(j), den = f.chi(j) - f.chi(i);
    const cplx dnum = f.tau(k) - f.tau(j), dden = f.tau(j) - f.tau(i);
    return {num / den, (dnum * den - num * dden) / (den * den)};
}

Domain default_domain(const PhaseParams& p) {
    std::vector<cplx> pts = stop_points(p);
    pts.push_back(kZStar);
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (auto z : pts) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    }
    const cplx c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
    double r = 0;
    for (auto z : pts) r = std::max(r, std::abs(z - c));
    r = std::max(3.0, 3.0 * r);
    r = std::ceil(r * 4.0) / 4.0;
    const double cx = std::round(c.real() * 4.0) / 4.0, cy = std::round(c.imag() * 4.0) / 4.0;
    return Domain{cx - r, cx + r, cy - r, cy + r};
}

StokesCurve trace_ordinary(int i, int j, const Frame& seed, const PhaseParams& p, const Domain& d,
                           const TraceOptions& opt) {
    auto stops = stop_points(p);
    return trace_impl(CurveKind::ordinary, i, j, -1, seed, p, d, opt, stops, nearest(stops, seed.z));
}

StokesCurve trace_higher(int i, int k, int j, const Frame& seed, const PhaseParams& p, const Domain& d,
                         const TraceOptions& opt) {
    auto stops = stop_points(p);
    return trace_impl(CurveKind::higher, i, j, k, seed, p, d, opt, stops, nearest(stops, seed.z));
}

std::vector<Seed> seeds_around(cplx z0, CurveKind kind, const PhaseParams& p, double r, int m) {
    std::vector<Frame> fr;
    fr.reserve(m + 1);
    Frame f0 = canonical_on_circle(z0, r, p);
    const double phi0 = std::arg(f0.z - z0);
    fr.push_back(f0);
    for (int s = 1; s <= m; ++s)
        fr.push_back(advance(fr.back(), z0 + r * std::polar(1.0, phi0 + 2.0 * std::numbers::pi * s / m), p));

    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < kBranches; ++a)
        for (int b = 0; b < kBranches; ++b) {
            if (a == b) continue;
            double mx = 0;
            for (const auto& f : fr) mx = std::max(mx, std::abs(f.chi(a) - f.chi(b)));
            if (mx < 50.0 * r) pairs.push_back({a, b});
        }

    std::vector<Seed> out;
    auto refine = [&](Frame g, int i, int j, int k) {
        for (int it = 0; it < 8; ++it) {
            Defining v = kind == CurveKind::ordinary ? ordinary_value(g, i, j) : higher_value(g, i, k, j);
            const double mm = std::abs(v.dg);
            const double delta = -v.g.imag() / mm;
            g = advance(g, g.z + delta * I * std::conj(v.dg) / mm, p);
            if (std::abs(delta) < 1e-15) break;
        }
        return g;
    };
    for (auto [a, b] : pairs) {
        std::vector<std::array<int, 3>> combos;
        if (kind == CurveKind::ordinary) {
            combos.push_back({a, b, -1});
        } else {
            for (int c = 0; c < kBranches; ++c)
                if (c != a && c != b) combos.push_back({c, a, b});  // h_{c>b;a}: g=(chi_b-chi_a)/(chi_a-chi_c)
        }
        for (auto [i, j, k] : combos) {
            for (int s = 0; s < m; ++s) {
                auto val = [&](const Frame& f) {
                    return kind == CurveKind::ordinary ? ordinary_value(f, i, j).g : higher_value(f, i, k, j).g;
                };
                const cplx v0 = val(fr[s]), v1 = val(fr[s + 1]);
                if (v0.imag() == v1.imag()) continue;
                if (!(v0.imag() * v1.imag() <= 0.0)) continue;
                if (v0.real() <= 0.0 || v1.real() <= 0.0) continue;
                const double u = -v0.imag() / (v1.imag() - v0.imag());
                Frame g = advance(fr[s], fr[s].z + u * (fr[s + 1].z - fr[s].z), p);
                g = refine(g, i, j, k);
                out.push_back({g, i, j, k});
            }
        }
    }
    return out;
}

double distance_to_segment(cplx z, cplx a, cplx b) {
    const cplx d = b - a;
    const double l2 = std::norm(d);
    double t = l2 > 0 ? ((z - a) * std::conj(d)).real() / l2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

double distance_to_polyline(cplx z, const std::vector<cplx>& poly) {
    if (poly.size() == 1) return std::abs(z - poly[0]);
    double best = INFINITY;
    for (size_t s = 0; s + 1 < poly.size(); ++s) best = std::min(best, distance_to_segment(z, poly[s], poly[s + 1]));
    return best;
}

namespace {

// Directed Hausdorff distance using a coarse bucket grid on b, over the
// vertices of a that pass keep.
double directed_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b,
                          const std::function<bool(cplx)>& keep = nullptr) {
    if (a.empty() || b.empty()) return INFINITY;
    StokesCurve cb;
    cb.pts = b;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (auto z : b) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    }
    const double pad = 1e-3 + 1e-3 * std::max(x1 - x0, y1 - y0);
    Domain d{x0 - pad, x1 + pad, y0 - pad, y1 + pad};
    std::vector<StokesCurve> v{cb};
    SegmentIndex idx(v, d, 256);
    double worst = 0;
    for (auto z : a) {
        if (keep && !keep(z)) continue;
        double best = INFINITY;
        for (double rad = pad; best == INFINITY && rad < 1e6; rad *= 4) {
            idx.query(z - cplx{rad, rad}, z + cplx{rad, rad}, [&](const SegmentRef& r) {
                best = std::min(best, distance_to_segment(z, b[r.seg], b[r.seg + 1]));
            });
            if (best > rad) best = INFINITY;
        }
        if (b.size() == 1) best = std::abs(z - b[0]);
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double refinement_distance(const StokesGraph& a, const StokesGraph& b, double exclude) {
    if (a.curves.size() != b.curves.size()) return INFINITY;
    auto keep = [&](cplx z) {
        for (const auto& t : a.turning)
            if (std::abs(z - t.z) < exclude) return false;
        return true;
    };
    double worst = 0;
    for (size_t c = 0; c < a.curves.size(); ++c) {
        const auto &A = a.curves[c].pts, &B = b.curves[c].pts;
        worst = std::max({worst, directed_hausdorff(A, B, keep), directed_hausdorff(B, A, keep)});
    }
    return worst;
}

namespace {

bool same_higher(const StokesCurve& a, const StokesCurve& b) {
    // b duplicates a when its interior lies on a and the label triples agree.
    if (a.kind != CurveKind::higher || b.kind != CurveKind::higher || b.pts.size() < 3) return false;
    const size_t mid = b.pts.size() / 2;
    if (distance_to_polyline(b.pts[mid], a.pts) > 1e-6) return false;
    size_t best = 0;
    for (size_t s = 0; s < a.pts.size(); ++s)
        if (std::abs(a.pts[s] - b.pts[mid]) < std::abs(a.pts[best] - b.pts[mid])) best = s;
    std::array<int, kBranches> perm;
    try {
        perm = match_labels(b.taus[mid], a.taus[best]);
    } catch (const Error&) {
        return false;
    }
    if (perm[b.j] != a.j) return false;
    return (perm[b.i] == a.i && perm[b.k] == a.k) || (perm[b.i] == a.k && perm[b.k] == a.i);
}

struct RawCrossing {
    cplx z;
    int a, b;
};

// True when B runs within 1e-6 of A over arclength 1e-2 on both sides of the
// candidate (where A extends that far), i.e. the curves overlap.
bool locally_coincident(const std::vector<cplx>& A, int sa, const std::vector<cplx>& B) {
    auto near_b = [&](cplx z) { return distance_to_polyline(z, B) < 1e-6; };
    int checked = 0;
    double arc = 0;
    int q = sa + 1;
    for (; q + 1 < int(A.size()) && arc < 1e-2; ++q) arc += std::abs(A[q + 1] - A[q]);
    if (arc >= 1e-2) {
        if (!near_b(A[q])) return false;
        ++checked;
    }
    arc = 0;
    q = sa;
    for (; q > 0 && arc < 1e-2; --q) arc += std::abs(A[q] - A[q - 1]);
    if (arc >= 1e-2) {
        if (!near_b(A[q])) return false;
        ++checked;
    }
    return checked > 0;
}

// Two traces meeting at the same turning point separate there only by tracing
// error, so intersections right next to it are not crossings.
bool ends_at(const std::vector<cplx>& P, cplx t) {
    return std::abs(P.front() - t) < 2e-3 || std::abs(P.back() - t) < 2e-3;
}

bool refine_crossing(const StokesGraph& g, int ca, int sa, double ua, int cb, int sb, double ub, cplx& z) {
    const auto& A = g.curves[ca];
    const auto& B = g.curves[cb];
    try {
        Frame f = make_frame(A.pts[sa], A.taus[sa], g.params);
        f = advance(f, z, g.params);
        auto bt = lerp_taus(B, sb, ub);
        auto perm = match_labels(bt, f.taus());
        const cplx z_start = z;
        for (int it = 0; it < 12; ++it) {
            Defining va = A.kind == CurveKind::ordinary ? ordinary_value(f, A.i, A.j) : higher_value(f, A.i, A.k, A.j);
            Defining vb = B.kind == CurveKind::ordinary ? ordinary_value(f, perm[B.i], perm[B.j])
                                                        : higher_value(f, perm[B.i], perm[B.k], perm[B.j]);
            const double fa = va.g.imag(), fb = vb.g.imag();
            const double a11 = va.dg.imag(), a12 = va.dg.real();
            const double a21 = vb.dg.imag(), a22 = vb.dg.real();
            const double det = a11 * a22 - a12 * a21;
            if (std::abs(det) < 1e-14 * std::abs(va.dg) * std::abs(vb.dg)) return true;
            const double dx = (fa * a22 - a12 * fb) / det;
            const double dy = (a11 * fb - fa * a21) / det;
            f = advance(f, f.z - cplx{dx, dy}, g.params);
            if (std::hypot(dx, dy) < 1e-15 * std::max(1.0, std::abs(f.z))) break;
        }
        if (std::abs(f.z - z_start) < 1e-3) z = f.z;
        return true;
    } catch (const Error&) {
        return true;
    }
}

void compute_crossings(StokesGraph& g) {
    const auto idx = g.index();
    std::vector<RawCrossing> raw;
    for (int ca = 0; ca < int(g.curves.size()); ++ca) {
        const auto& P = g.curves[ca].pts;
        for (int s = 0; s + 1 < int(P.size()); ++s) {
            idx->query(P[s], P[s + 1], [&](const SegmentRef& r) {
                if (r.curve <= ca) return;
                const auto& Q = g.curves[r.curve].pts;
                double ss, uu;
                if (!segment_intersection(P[s], P[s + 1], Q[r.seg], Q[r.seg + 1], ss, uu)) return;
                if (locally_coincident(P, s, Q)) return;
                const cplx zc = P[s] + ss * (P[s + 1] - P[s]);
                for (const auto& t : g.turning)
                    if (std::abs(zc - t.z) < 2e-2 && ends_at(P, t.z) && ends_at(Q, t.z)) return;
                cplx z = P[s] + ss * (P[s + 1] - P[s]);
                refine_crossing(g, ca, s, ss, r.curve, r.seg, uu, z);
                raw.push_back({z, ca, r.curve});
            });
        }
    }
    for (const auto& rc : raw) {
        Crossing* hit = nullptr;
        for (auto& c : g.crossings)
            if (std::abs(c.point - rc.z) <= 1e-6) {
                hit = &c;
                break;
            }
        if (!hit) {
            g.crossings.push_back({rc.z, {}, CrossingKind::stokes});
            hit = &g.crossings.back();
        }
        for (int id : {rc.a, rc.b})
            if (std::find(hit->curves.begin(), hit->curves.end(), id) == hit->curves.end()) hit->curves.push_back(id);
    }
    for (auto& c : g.crossings) {
        std::sort(c.curves.begin(), c.curves.end());
        bool ord = false, hi = false;
        for (int id : c.curves) (g.curves[id].kind == CurveKind::ordinary ? ord : hi) = true;
        c.kind = ord && hi ? CrossingKind::mixed : (hi ? CrossingKind::higher : CrossingKind::stokes);
    }
    std::sort(g.crossings.begin(), g.crossings.end(), [](const Crossing& x, const Crossing& y) {
        if (x.point.real() != y.point.real()) return x.point.real() < y.point.real();
        return x.point.imag() < y.point.imag();
    });
}

}  // namespace

StokesGraph build_graph(const PhaseParams& p, const Domain& d, const TraceOptions& opt) {
    if (d.empty()) throw Error(ErrorKind::InvalidInput, "empty domain rectangle");
    StokesGraph g;
    g.params = p;
    g.domain = d;
    g.reference = reference_frame(p);
    if (const int cls = coalescence_class(p); cls < 3)
        g.warnings.push_back("degenerate parameters: coalescence class " + std::to_string(cls));
    for (auto t : turning_points(p)) g.turning.push_back(t);
    for (auto t : virtual_turning_points(p)) g.turning.push_back(t);
    std::vector<cplx> stops;
    for (const auto& t : g.turning) stops.push_back(t.z);

    struct Traced {
        StokesCurve c;
        double angle;
    };
    std::vector<Traced> traced;
    for (int s = 0; s < int(g.turning.size()); ++s) {
        const cplx z0 = g.turning[s].z;
        if (!d.contains(z0)) continue;
        for (CurveKind kind : {CurveKind::ordinary, CurveKind::higher}) {
            std::vector<Seed> seeds;
            try {
                seeds = seeds_around(z0, kind, p);
            } catch (const Error& e) {
                g.warnings.push_back(std::string("seeding failed near source ") + std::to_string(s) + ": " + e.what());
                continue;
            }
            for (const auto& sd : seeds) {
                try {
                    StokesCurve c = trace_impl(kind, sd.i, sd.j, sd.k, sd.frame, p, d, opt, stops, z0);
                    c.source = s;
                    c.source_kind = g.turning[s].kind;
                    if (c.pts.size() < 2) continue;
                    traced.push_back({std::move(c), std::arg(sd.frame.z - z0)});
                } catch (const Error& e) {
                    g.warnings.push_back(std::string("trace failed from source ") + std::to_string(s) + ": " + e.what());
                }
            }
        }
    }
    std::vector<Traced> kept;
    for (auto& t : traced) {
        bool dup = false;
        for (const auto& k : kept)
            if (same_higher(k.c, t.c)) {
                dup = true;
                break;
            }
        if (!dup) kept.push_back(std::move(t));
    }
    std::stable_sort(kept.begin(), kept.end(), [](const Traced& x, const Traced& y) {
        auto key = [](const Traced& t) {
            return std::make_tuple(int(t.c.kind), t.c.i, t.c.j, t.c.k, t.c.source, t.angle);
        };
        return key(x) < key(y);
    });
    for (auto& t : kept) g.curves.push_back(std::move(t.c));
    compute_crossings(g);
    for (const auto& c : g.crossings) {
        if (c.kind != CrossingKind::mixed) continue;
        for (int a : c.curves)
            for (int b : c.curves) {
                if (g.curves[a].kind != CurveKind::ordinary || g.curves[b].kind != CurveKind::higher) continue;
                const auto& A = g.curves[a].pts;
                const auto& B = g.curves[b].pts;
                size_t ia = 0;
                for (size_t q = 0; q < A.size(); ++q)
                    if (std::abs(A[q] - c.point) < std::abs(A[ia] - c.point)) ia = q;
                if (ia + 1 < A.size() && distance_to_polyline(A[ia + 1], B) < 1e-6)
                    g.warnings.push_back("ordinary and higher-order curves nearly coincide near a crossing");
            }
    }
    return g;
}

StokesGraph build_graph(const PhaseParams& p) { return build_graph(p, default_domain(p)); }

double safe_distance(const StokesGraph& g) { return 1e-4 * g.domain.diameter(); }

std::vector<CrossingEvent> path_crossings(const std::vector<cplx>& path, const StokesGraph& g, const Frame& start) {
    std::vector<CrossingEvent> events;
    if (path.size() < 2) return events;
    const double dsafe = safe_distance(g);
    for (size_t s = 0; s + 1 < path.size(); ++s) {
        for (const auto& c : g.crossings)
            if (distance_to_segment(c.point, path[s], path[s + 1]) < dsafe)
                throw Error(ErrorKind::PathTooCloseToCrossing, "path passes near a crossing point");
        for (const auto& t : g.turning)
            if (distance_to_segment(t.z, path[s], path[s + 1]) < dsafe)
                throw Error(ErrorKind::PathTooCloseToCrossing, "path passes near a turning point");
    }
    struct Hit {
        double arc;
        int curve, seg;
        double u;
        size_t pseg;
        double ps;
    };
    std::vector<Hit> hits;
    const auto idx = g.index();
    double arc0 = 0;
    for (size_t s = 0; s + 1 < path.size(); ++s) {
        const double len = std::abs(path[s + 1] - path[s]);
        idx->query(path[s], path[s + 1], [&](const SegmentRef& r) {
            const auto& Q = g.curves[r.curve].pts;
            double ss, uu;
            if (!segment_intersection(path[s], path[s + 1], Q[r.seg], Q[r.seg + 1], ss, uu)) return;
            hits.push_back({arc0 + ss * len, r.curve, r.seg, uu, s, ss});
        });
        arc0 += len;
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) {
        if (x.arc != y.arc) return x.arc < y.arc;
        return x.curve < y.curve;
    });
    // A path through a shared vertex hits both adjacent segments (of the curve
    // or of the path). Keep one hit for a transverse pass, none for a touch.
    {
        const double tol = 1e-9 * std::max(1.0, arc0);
        std::vector<Hit> kept;
        for (size_t q = 0; q < hits.size(); ++q) {
            const Hit& h = hits[q];
            bool dup = false, touch = false;
            for (size_t r = q + 1; r < hits.size() && hits[r].arc - h.arc <= tol; ++r) {
                if (hits[r].curve != h.curve) continue;
                dup = true;
                const auto& Q = g.curves[h.curve].pts;
                if (hits[r].pseg == h.pseg && std::abs(hits[r].seg - h.seg) == 1) {
                    const int lo = std::min(h.seg, hits[r].seg);
                    const cplx d = path[h.pseg + 1] - path[h.pseg];
                    const double s0 = ((Q[lo] - path[h.pseg]) * std::conj(d)).imag();
                    const double s1 = ((Q[lo + 2] - path[h.pseg]) * std::conj(d)).imag();
                    touch = s0 * s1 > 0;
                }
                hits.erase(hits.begin() + long(r));
                break;
            }
            if (!(dup && touch)) kept.push_back(h);
        }
        hits = std::move(kept);
    }
    Frame f = start;
    size_t done_seg = 0;
    for (const auto& h : hits) {
        while (done_seg < h.pseg) f = advance(f, path[++done_seg], g.params);
        const cplx zp = path[h.pseg] + h.ps * (path[h.pseg + 1] - path[h.pseg]);
        Frame fe = advance(f, zp, g.params);
        const auto& c = g.curves[h.curve];
        const auto ct = lerp_taus(c, h.seg, h.u);
        std::array<int, kBranches> perm;
        try {
            perm = match_labels(ct, fe.taus());
        } catch (const Error&) {
            throw Error(ErrorKind::LabelMismatch, "curve branch data does not match path frame");
        }
        for (int a = 0; a < kBranches; ++a)
            if (std::abs(ct[a] - fe.tau(perm[a])) > 0.25 * min_gap(fe.taus()))
                throw Error(ErrorKind::LabelMismatch, "curve branch data does not match path frame");
        CrossingEvent e;
        e.arclength = h.arc;
        e.curve = h.curve;
        e.point = zp;
        e.i = perm[c.i];
        e.j = perm[c.j];
        e.k = c.kind == CurveKind::higher ? perm[c.k] : -1;
        const cplx dz = path[h.pseg + 1] - path[h.pseg];
        const Defining v = c.kind == CurveKind::ordinary ? ordinary_value(fe, e.i, e.j) : higher_value(fe, e.i, e.k, e.j);
        const double dir = (v.dg * dz).imag();
        e.direction = dir > 0 ? 1 : -1;
        events.push_back(e);
    }
    return events;
}

std::vector<CrossingLocation> ordinary_crossing_locations(const StokesGraph& g, double dedup) {
    std::vector<CrossingLocation> out;
    std::vector<std::vector<int>> members;
    for (const auto& c : g.crossings) {
        std::vector<int> ord;
        for (int id : c.curves)
            if (g.curves[id].kind == CurveKind::ordinary) ord.push_back(id);
        if (ord.size() < 2) continue;
        // at least one transversal ordinary pair must meet here
        int hit = -1;
        for (size_t k = 0; k < out.size(); ++k)
            if (std::abs(out[k].point - c.point) <= dedup) hit = int(k);
        if (hit < 0) {
            out.push_back({c.point, 0});
            members.push_back({});
            hit = int(out.size()) - 1;
        }
        for (int id : ord)
            if (std::find(members[hit].begin(), members[hit].end(), id) == members[hit].end())
                members[hit].push_back(id);
    }
    for (size_t k = 0; k < out.size(); ++k) out[k].lines = int(members[k].size());
    return out;
}

}  // namespace atlas
