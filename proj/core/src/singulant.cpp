#include "atlas/singulant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "poly.hpp"

namespace atlas {

namespace {

constexpr cplx I{0.0, 1.0};
const double kSqrtPi = std::sqrt(std::numbers::pi);

// Published singulant values at z* for the reference parameters (4 dp).
const std::array<cplx, kBranches> kReferenceChi = {
    cplx{-1.0464, 0.7948}, cplx{-1.1944, 0.0920}, cplx{1.2212, 2.0196}, cplx{1.0196, 0.6936}};

bool newton_root(cplx& tau, cplx z, const PhaseParams& p, double tol) {
    for (int it = 0; it < 40; ++it) {
        cplx d = quartic_dtau(tau, p);
        if (std::abs(d) == 0.0) return false;
        cplx step = quartic(tau, z, p) / d;
        tau -= step;
        if (!std::isfinite(std::abs(tau))) return false;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(tau))) break;
    }
    return std::abs(quartic(tau, z, p)) <= tol;
}

cplx continued_sqrt(cplx d, cplx prev) {
    cplx s = std::sqrt(d);
    if (std::abs(s - prev) > std::abs(s + prev)) s = -s;
    return s;
}

void fill_branch(Branch& br, int label, cplx tau, cplx z, cplx sqrt_d, const PhaseParams& p) {
    br.label = label;
    br.tau = tau;
    br.chi = singulant(tau, z, p);
    br.amp0 = kSqrtPi / sqrt_d;
    br.alpha = Rational{-3, 10};
}

bool try_step(const Frame& f, cplx z1, const PhaseParams& p, Frame& out) {
    const auto old = f.taus();
    const double gap0 = min_gap(old);
    const double tol = 1e-12 * std::max(1.0, std::abs(z1));
    std::array<cplx, kBranches> nt = old;
    for (int i = 0; i < kBranches; ++i) {
        if (!newton_root(nt[i], z1, p, tol)) return false;
        if (std::abs(nt[i] - old[i]) >= 0.25 * gap0) return false;
    }
    if (min_gap(nt) < 1e-12) return false;
    out.z = z1;
    for (int i = 0; i < kBranches; ++i) {
        cplx d0 = amp_denominator(old[i], p);
        cplx d1 = amp_denominator(nt[i], p);
        if (std::abs(d1 - d0) >= 0.5 * std::abs(d0)) return false;
        cplx prev = kSqrtPi / f.amp0(i);
        fill_branch(out.branches[i], i + 1, nt[i], z1, continued_sqrt(d1, prev), p);
    }
    return true;
}

Frame advance_rec(const Frame& f, cplx z1, const PhaseParams& p, int depth) {
    Frame out;
    if (try_step(f, z1, p, out)) return out;
    if (depth > 48) {
        if (min_gap(f.taus()) < 1e-9)
            throw Error(ErrorKind::PathThroughTurningPoint, "roots coalesce along continuation path");
        throw Error(ErrorKind::LabelAmbiguity, "continuation step could not be resolved");
    }
    cplx zm = 0.5 * (f.z + z1);
    return advance_rec(advance_rec(f, zm, p, depth + 1), z1, p, depth + 1);
}

std::vector<cplx> quartic_coeffs(cplx z, const PhaseParams& p) {
    return {5.0, 0.0, -3.0 * p.a, 2.0 * I * p.b, z};
}

}  // namespace

PhaseParams reference_params() { return PhaseParams{3.0, 1.0}; }

bool is_reference(const PhaseParams& p) { return p.a == 3.0 && p.b == 1.0; }

std::array<cplx, kBranches> Frame::taus() const {
    std::array<cplx, kBranches> r;
    for (int i = 0; i < kBranches; ++i) r[i] = branches[i].tau;
    return r;
}

cplx phase(cplx t, cplx z, const PhaseParams& p) {
    cplx t2 = t * t;
    return -(t2 * t2 * t - p.a * t2 * t - I * p.b * t2 + z * t);
}

cplx phase_dt(cplx t, cplx z, const PhaseParams& p) {
    cplx t2 = t * t;
    return -(5.0 * t2 * t2 - 3.0 * p.a * t2 - 2.0 * I * p.b * t + z);
}

cplx quartic(cplx tau, cplx z, const PhaseParams& p) {
    cplx t2 = tau * tau;
    return 5.0 * t2 * t2 - 3.0 * p.a * t2 + 2.0 * I * p.b * tau + z;
}

cplx quartic_dtau(cplx tau, const PhaseParams& p) {
    return 20.0 * tau * tau * tau - 6.0 * p.a * tau + 2.0 * I * p.b;
}

cplx singulant(cplx tau, cplx z, const PhaseParams& p) {
    cplx t2 = tau * tau;
    return -(2.0 * p.a / 5.0) * t2 * tau + (3.0 * I * p.b / 5.0) * t2 + (4.0 * z / 5.0) * tau;
}

cplx amp_denominator(cplx tau, const PhaseParams& p) {
    return -10.0 * tau * tau * tau + 3.0 * p.a * tau - I * p.b;
}

double min_gap(const std::array<cplx, kBranches>& r) {
    double g = INFINITY;
    for (int i = 0; i < kBranches; ++i)
        for (int j = i + 1; j < kBranches; ++j) g = std::min(g, std::abs(r[i] - r[j]));
    return g;
}

std::array<cplx, kBranches> saddle_roots_unchecked(cplx z, const PhaseParams& p) {
    auto r = detail::poly_roots(quartic_coeffs(z, p));
    std::array<cplx, kBranches> out;
    const double tol = 1e-13 * std::max(1.0, std::abs(z));
    for (int i = 0; i < kBranches; ++i) {
        cplx t = r[i];
        cplx keep = t;
        if (newton_root(t, z, p, tol) || std::abs(quartic(t, z, p)) < std::abs(quartic(keep, z, p)))
            keep = t;
        out[i] = keep;
    }
    std::sort(out.begin(), out.end(), [](cplx x, cplx y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return out;
}

std::array<cplx, kBranches> saddle_roots(cplx z, const PhaseParams& p) {
    auto r = saddle_roots_unchecked(z, p);
    if (min_gap(r) < 1e-9)
        throw Error(ErrorKind::RootConditioning, "two saddle roots within 1e-9; near a turning point");
    return r;
}

std::array<int, kBranches> reference_orientation(const PhaseParams& p) {
    if (is_reference(p)) return {-1, 1, 1, 1};
    return {1, 1, 1, 1};
}

std::array<int, kBranches> match_labels(const std::array<cplx, kBranches>& from,
                                        const std::array<cplx, kBranches>& to) {
    std::array<int, kBranches> perm{};
    std::array<bool, kBranches> used{};
    for (int i = 0; i < kBranches; ++i) {
        int best = 0;
        for (int k = 1; k < kBranches; ++k)
            if (std::abs(to[k] - from[i]) < std::abs(to[best] - from[i])) best = k;
        if (used[best]) throw Error(ErrorKind::LabelAmbiguity, "nearest-root matching is not a bijection");
        used[best] = true;
        perm[i] = best;
    }
    return perm;
}

Frame reference_frame(const PhaseParams& p) {
    auto r = saddle_roots(kZStar, p);
    std::array<cplx, kBranches> ordered = r;
    if (is_reference(p)) {
        std::array<cplx, kBranches> chis;
        for (int k = 0; k < kBranches; ++k) chis[k] = singulant(r[k], kZStar, p);
        auto perm = match_labels(kReferenceChi, chis);
        for (int i = 0; i < kBranches; ++i) ordered[i] = r[perm[i]];
    }
    const auto orient = reference_orientation(p);
    Frame f;
    f.z = kZStar;
    for (int i = 0; i < kBranches; ++i) {
        cplx s = std::sqrt(amp_denominator(ordered[i], p)) * double(orient[i]);
        fill_branch(f.branches[i], i + 1, ordered[i], kZStar, s, p);
    }
    return f;
}

Frame make_frame(cplx z, const std::array<cplx, kBranches>& taus, const PhaseParams& p) {
    Frame f;
    f.z = z;
    for (int i = 0; i < kBranches; ++i)
        fill_branch(f.branches[i], i + 1, taus[i], z, std::sqrt(amp_denominator(taus[i], p)), p);
    return f;
}

Frame advance(const Frame& from, cplx z, const PhaseParams& p) {
    if (z == from.z) return from;
    return advance_rec(from, z, p, 0);
}

Frame frame_at(cplx z, const PhaseParams& p, const Frame* ref) {
    if (!ref) return advance(reference_frame(p), z, p);
    auto roots = saddle_roots_unchecked(z, p);
    auto old = ref->taus();
    auto perm = match_labels(old, roots);
    const double g = min_gap(old);
    Frame f;
    f.z = z;
    for (int i = 0; i < kBranches; ++i) {
        if (std::abs(roots[perm[i]] - old[i]) >= 0.5 * g)
            throw Error(ErrorKind::LabelAmbiguity, "step too large for nearest-root labelling");
        cplx prev = kSqrtPi / ref->amp0(i);
        fill_branch(f.branches[i], i + 1, roots[perm[i]], z,
                    continued_sqrt(amp_denominator(roots[perm[i]], p), prev), p);
    }
    return f;
}

std::vector<Frame> continue_frame(const std::vector<cplx>& path, const PhaseParams& p) {
    std::vector<Frame> out;
    if (path.empty()) return out;
    out.reserve(path.size());
    out.push_back(frame_at(path.front(), p));
    for (size_t k = 1; k < path.size(); ++k) out.push_back(advance(out.back(), path[k], p));
    return out;
}

namespace {

std::pair<int, int> closest_pair(const Frame& f) {
    std::pair<int, int> best{0, 1};
    double g = INFINITY;
    for (int i = 0; i < kBranches; ++i)
        for (int j = i + 1; j < kBranches; ++j) {
            double d = std::abs(f.tau(i) - f.tau(j));
            if (d < g) {
                g = d;
                best = {i, j};
            }
        }
    return best;
}

Frame frame_near(cplx z0, const PhaseParams& p) {
    cplx dir = kZStar - z0;
    dir = std::abs(dir) > 0 ? dir / std::abs(dir) : cplx{1.0, 0.0};
    return frame_at(z0 + 1e-6 * dir, p);
}

// Divided differences of z(tau) and w(tau) for the virtual turning point system.
struct Dd {
    cplx f1, f2, f1x, f1y, f2x, f2y;
};

Dd divided(cplx x, cplx y, const PhaseParams& p) {
    // h_n = sum_{m=0}^{n} x^m y^{n-m}
    cplx h[5], hx[5], hy[5];
    for (int n = 0; n < 5; ++n) {
        h[n] = hx[n] = hy[n] = 0.0;
        for (int m = 0; m <= n; ++m) {
            h[n] += std::pow(x, m) * std::pow(y, n - m);
            if (m > 0) hx[n] += double(m) * std::pow(x, m - 1) * std::pow(y, n - m);
            if (n - m > 0) hy[n] += double(n - m) * std::pow(x, m) * std::pow(y, n - m - 1);
        }
    }
    const cplx ib = I * p.b;
    Dd d;
    d.f1 = -5.0 * h[3] + 3.0 * p.a * h[1] - 2.0 * ib * h[0];
    d.f1x = -5.0 * hx[3] + 3.0 * p.a * hx[1];
    d.f1y = -5.0 * hy[3] + 3.0 * p.a * hy[1];
    d.f2 = -4.0 * h[4] + 2.0 * p.a * h[2] - ib * h[1];
    d.f2x = -4.0 * hx[4] + 2.0 * p.a * hx[2] - ib * hx[1];
    d.f2y = -4.0 * hy[4] + 2.0 * p.a * hy[2] - ib * hy[1];
    return d;
}

cplx z_of_tau(cplx t, const PhaseParams& p) {
    return -5.0 * std::pow(t, 4) + 3.0 * p.a * t * t - 2.0 * I * p.b * t;
}

}  // namespace

std::vector<TurningPoint> turning_points(const PhaseParams& p) {
    auto ts = detail::poly_roots({-10.0, 0.0, 3.0 * p.a, -I * p.b});
    std::vector<cplx> zs;
    for (auto t : ts) zs.push_back(1.5 * t * (p.a * t - I * p.b));
    std::vector<TurningPoint> out;
    std::vector<int> counts;
    std::vector<cplx> sums;
    for (auto z : zs) {
        bool merged = false;
        for (size_t k = 0; k < out.size(); ++k)
            if (std::abs(out[k].z - z) <= 1e-7 * std::max(1.0, std::abs(z))) {
                ++counts[k];
                sums[k] += z;
                merged = true;
                break;
            }
        if (!merged) {
            TurningPoint tp;
            tp.z = z;
            out.push_back(tp);
            counts.push_back(1);
            sums.push_back(z);
        }
    }
    for (size_t k = 0; k < out.size(); ++k) {
        out[k].z = sums[k] / double(counts[k]);
        out[k].multiplicity = counts[k];
        if (std::abs(out[k].z.imag()) < 1e-14) out[k].z.imag(0.0);
        if (std::abs(out[k].z.real()) < 1e-14) out[k].z.real(0.0);
        out[k].kind = TurningKind::turning;
        try {
            auto pr = closest_pair(frame_near(out[k].z, p));
            out[k].i = pr.first;
            out[k].j = pr.second;
        } catch (const Error&) {
            out[k].i = 0;
            out[k].j = 1;
        }
    }
    std::sort(out.begin(), out.end(), [](const TurningPoint& x, const TurningPoint& y) {
        if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
        return x.z.imag() < y.z.imag();
    });
    return out;
}

std::vector<TurningPoint> virtual_turning_points(const PhaseParams& p) {
    const double L = 3.0 * std::sqrt(1.0 + std::abs(p.a) + std::abs(p.b));
    const int n = 40;
    std::vector<TurningPoint> out;
    for (int gx = 0; gx < n; ++gx)
        for (int gy = 0; gy < n; ++gy) {
            cplx t1{-L + 2.0 * L * gx / (n - 1), -L + 2.0 * L * gy / (n - 1)};
            cplx z1 = z_of_tau(t1, p);
            auto others = detail::poly_roots(quartic_coeffs(z1, p));
            for (auto t2 : others) {
                if (std::abs(t2 - t1) < 1e-6) continue;
                cplx x = t1, y = t2;
                bool ok = false;
                for (int it = 0; it < 60; ++it) {
                    Dd d = divided(x, y, p);
                    cplx det = d.f1x * d.f2y - d.f1y * d.f2x;
                    if (std::abs(det) < 1e-300) break;
                    cplx dx = (d.f1 * d.f2y - d.f1y * d.f2) / det;
                    cplx dy = (d.f1x * d.f2 - d.f1 * d.f2x) / det;
                    x -= dx;
                    y -= dy;
                    if (!std::isfinite(std::abs(x)) || !std::isfinite(std::abs(y)) || std::abs(x) > 1e3) break;
                    if (std::abs(dx) + std::abs(dy) < 1e-14 * (1.0 + std::abs(x) + std::abs(y))) {
                        ok = true;
                        break;
                    }
                }
                if (!ok || std::abs(x - y) < 1e-4) continue;
                cplx z = z_of_tau(x, p);
                bool dup = false;
                for (auto& v : out)
                    if (std::abs(v.z - z) < 1e-8 * std::max(1.0, std::abs(z))) dup = true;
                if (dup) continue;
                TurningPoint tp;
                tp.z = z;
                tp.kind = TurningKind::virtual_;
                out.push_back(tp);
            }
        }
    for (auto& v : out) {
        if (std::abs(v.z.imag()) < 1e-12) v.z.imag(0.0);
        Frame f = frame_at(v.z, p);
        double best = INFINITY;
        for (int i = 0; i < kBranches; ++i)
            for (int j = i + 1; j < kBranches; ++j) {
                double d = std::abs(f.chi(i) - f.chi(j));
                if (d < best) {
                    best = d;
                    v.i = i;
                    v.j = j;
                }
            }
    }
    std::sort(out.begin(), out.end(), [](const TurningPoint& x, const TurningPoint& y) {
        if (x.z.real() != y.z.real()) return x.z.real() < y.z.real();
        return x.z.imag() < y.z.imag();
    });
    if (coalescence_class(p) == 3 && out.size() < 3)
        throw Error(ErrorKind::SeedExhaustion, "fewer than 3 virtual turning points found");
    return out;
}

int coalescence_class(const PhaseParams& p) {
    const double tol = 1e-10 * std::max(1.0, std::max(std::abs(p.a), std::abs(p.b)));
    if (std::abs(p.a) <= tol && std::abs(p.b) <= tol) return 1;
    if (std::abs(p.b) <= tol) return 2;
    const double edge = -std::cbrt(2.5) * std::pow(std::abs(p.b), 2.0 / 3.0);
    if (std::abs(p.a - edge) <= tol) return 2;
    return 3;
}

PhysicalMap from_physical(double x1, double x2, double x3) {
    if (x1 == 0.0) throw Error(ErrorKind::ZeroX1, "x1 must be nonzero");
    PhysicalMap m;
    m.eps = std::pow(std::abs(x1), -1.25);
    m.z = std::pow(m.eps, 0.8) * x1;
    m.params.b = std::pow(m.eps, 0.6) * x2;
    m.params.a = std::pow(m.eps, 0.4) * x3;
    return m;
}

}  // namespace atlas
