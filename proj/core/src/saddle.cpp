#include "atlas/saddle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace atlas {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

cplx oriented_sqrt_d(const Frame& f, int i) { return kSqrtPi / f.amp0(i); }

// Follows t(w) with F(t) - chi_i = lambda w^2 from the saddle outward.
class Flow {
public:
    Flow(int i, const Frame& f, const PhaseParams& p, cplx lambda) : p_(p), z_(f.z), chi_(f.chi(i)), lambda_(lambda) {
        t_ = -f.tau(i);
        for (int k = 0; k < kBranches; ++k)
            if (k != i) others_.push_back(-f.tau(k));
        slope0_ = I * std::sqrt(lambda) / oriented_sqrt_d(f, i);
    }

    cplx t() const { return t_; }
    double w() const { return w_; }
    double closest() const { return closest_; }

    cplx dt_dw(cplx t, double w) const {
        if (w == 0.0) return slope0_;
        return 2.0 * lambda_ * w / phase_dt(t, z_, p_);
    }

    void step_to(double target) {
        int guard = 0;
        while (w_ != target) {
            if (++guard > 2000000) throw Error(ErrorKind::QuadratureFailure, "descent flow did not progress");
            const cplx d = dt_dw(t_, w_);
            const double hmax = std::min(0.05 * std::max(1.0, std::abs(t_)), 0.2 * near(t_));
            double dw = target - w_;
            if (std::abs(d * dw) > hmax) dw = std::copysign(hmax / std::abs(d), dw);
            for (;;) {
                if (std::abs(dw) < 1e-14 * std::max(1.0, std::abs(w_)))
                    throw Error(ErrorKind::SaddleCollision, "descent flow stalled near another saddle");
                const double wn = (std::abs(target - w_ - dw) < 1e-15 * std::max(1.0, std::abs(target))) ? target
                                                                                                         : w_ + dw;
                const cplx pred = t_ + d * (wn - w_);
                cplx tn = pred;
                if (newton(tn, wn) && std::abs(tn - pred) <= 0.3 * std::abs(d * (wn - w_)) + 1e-12) {
                    t_ = tn;
                    w_ = wn;
                    closest_ = std::min(closest_, near(t_));
                    break;
                }
                dw *= 0.5;
            }
        }
    }

private:
    double near(cplx t) const {
        double m = INFINITY;
        for (auto s : others_) m = std::min(m, std::abs(t - s));
        return m;
    }

    bool newton(cplx& t, double w) const {
        const cplx target = chi_ + lambda_ * w * w;
        const double scale = std::max({1.0, std::abs(chi_), std::abs(target)});
        for (int it = 0; it < 30; ++it) {
            const cplx r = phase(t, z_, p_) - target;
            const cplx d = phase_dt(t, z_, p_);
            if (std::abs(d) == 0.0) return false;
            const cplx step = r / d;
            t -= step;
            if (!std::isfinite(std::abs(t))) return false;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(t)))
                return std::abs(phase(t, z_, p_) - target) <= 1e-11 * scale;
        }
        return std::abs(phase(t, z_, p_) - target) <= 1e-11 * scale;
    }

    const PhaseParams& p_;
    cplx z_, chi_, lambda_, slope0_;
    std::vector<cplx> others_;
    cplx t_;
    double w_ = 0.0;
    double closest_ = INFINITY;
};

double t_max(cplx z, const PhaseParams& p) {
    return 10.0 * std::pow(1.0 + std::abs(z) + std::abs(p.a) + std::abs(p.b), 0.25);
}

std::vector<cplx> trace_half(Flow& fl, int sign, double tmax) {
    std::vector<cplx> pts{fl.t()};
    double w = 0;
    while (std::abs(fl.t()) <= tmax) {
        w += sign * std::max(0.05, 0.1 * std::abs(w));
        fl.step_to(w);
        pts.push_back(fl.t());
    }
    return pts;
}

}  // namespace

int valley_of(cplx t, double arg_eps) {
    const double k = std::round((5.0 * std::arg(t) - arg_eps - kPi) / (2.0 * kPi));
    return int(((long long)k % kValleys + kValleys) % kValleys);
}

std::array<int, kValleys> DescentPath::chain() const {
    std::array<int, kValleys> c{};
    c[to_valley] += 1;
    c[from_valley] -= 1;
    return c;
}

DescentPath descent_path(int i, const Frame& f, double arg_eps, const PhaseParams& p) {
    if (i < 0 || i >= kBranches) throw Error(ErrorKind::IndexError, "saddle label out of range");
    if (min_gap(f.taus()) < 1e-9) throw Error(ErrorKind::InvalidInput, "point is at a turning point");
    const cplx lambda = std::polar(1.0, arg_eps);
    const double tm = t_max(f.z, p);
    DescentPath d;
    d.saddle = i;
    d.arg_eps = arg_eps;
    Flow fw(i, f, p, lambda), bw(i, f, p, lambda);
    d.forward = trace_half(fw, 1, tm);
    d.backward = trace_half(bw, -1, tm);
    d.closest_saddle = std::min(fw.closest(), bw.closest());
    if (d.closest_saddle < 1e-6)
        throw Error(ErrorKind::SaddleCollision, "descent path meets another saddle; perturb arg eps");
    d.to_valley = valley_of(d.forward.back(), arg_eps);
    d.from_valley = valley_of(d.backward.back(), arg_eps);
    return d;
}

AdjacencyRecord adjacency(int i, int j, const Frame& f, const PhaseParams& p, double probe) {
    if (i == j) throw Error(ErrorKind::IndexError, "adjacency needs distinct saddles");
    const double crit = std::arg(f.chi(j) - f.chi(i));
    const auto plus = descent_path(i, f, crit + probe, p).chain();
    const auto minus = descent_path(i, f, crit - probe, p).chain();
    const auto cj = descent_path(j, f, crit, p).chain();
    std::array<int, kValleys> diff;
    bool any = false;
    for (int k = 0; k < kValleys; ++k) {
        diff[k] = plus[k] - minus[k];
        any = any || diff[k] != 0;
    }
    AdjacencyRecord r{i, j, 0, 0};
    if (!any) return r;
    for (int s : {1, -1}) {
        bool match = true;
        for (int k = 0; k < kValleys; ++k) match = match && diff[k] == s * cj[k];
        if (match) {
            r.A = 1;
            r.gamma = s < 0 ? 1 : 0;
            return r;
        }
    }
    throw Error(ErrorKind::ProbeAmbiguity, "contour jump is not a multiple of the adjacent contour");
}

StokesMatrix base_stokes_constants(const Frame& f, const PhaseParams& p) {
    StokesMatrix S(kBranches);
    for (int i = 0; i < kBranches; ++i)
        for (int j = 0; j < kBranches; ++j)
            if (i != j) S(i, j) = adjacency(i, j, f, p).stokes();
    return S;
}

StokesMatrix base_stokes_constants(cplx z, const PhaseParams& p) { return base_stokes_constants(frame_at(z, p), p); }

std::array<int, kBranches> contour_weights(const Frame& f, const PhaseParams& p, double arg) {
    Eigen::Matrix<double, kValleys, kBranches> A;
    for (int j = 0; j < kBranches; ++j) {
        const auto c = descent_path(j, f, arg, p).chain();
        for (int k = 0; k < kValleys; ++k) A(k, j) = c[k];
    }
    Eigen::Matrix<double, kValleys, 1> L = Eigen::Matrix<double, kValleys, 1>::Zero();
    L(0) = 1;
    L(4) = -1;
    const Eigen::Matrix<double, kBranches, 1> n = A.colPivHouseholderQr().solve(L);
    std::array<int, kBranches> w;
    for (int j = 0; j < kBranches; ++j) w[j] = int(std::lround(n(j)));
    Eigen::Matrix<double, kBranches, 1> nr;
    for (int j = 0; j < kBranches; ++j) nr(j) = w[j];
    if ((A * nr - L).norm() > 1e-9)
        throw Error(ErrorKind::QuadratureFailure, "original contour is not an integer sum of descent contours");
    return w;
}

namespace {

const std::array<double, 16>& gl_nodes() {
    static const std::array<double, 16> x = [] {
        std::array<double, 16> r{};
        for (int k = 0; k < 16; ++k) {
            double t = std::cos(kPi * (k + 0.75) / 16.5);
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = t;
                for (int n = 2; n <= 16; ++n) {
                    const double p2 = ((2 * n - 1) * t * p1 - (n - 1) * p0) / n;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = 16 * (t * p1 - p0) / (t * t - 1);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            r[k] = t;
        }
        return r;
    }();
    return x;
}

double gl_weight(double t) {
    double p0 = 1, p1 = t;
    for (int n = 2; n <= 16; ++n) {
        const double p2 = ((2 * n - 1) * t * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
    }
    const double dp = 16 * (t * p1 - p0) / (t * t - 1);
    return 2.0 / ((1 - t * t) * dp * dp);
}

// int_{-W}^{W} exp(-omega w^2) t'(w) dw along C_i with lambda = eps omega.
cplx contour_integral(int i, const Frame& f, const PhaseParams& p, double eps, double rotation, int panels) {
    const cplx omega = std::polar(1.0, rotation);
    const double W = std::sqrt(42.0 / std::cos(rotation));
    const auto& x = gl_nodes();
    std::vector<std::pair<double, double>> nodes;
    const double h = 2 * W / panels;
    for (int q = 0; q < panels; ++q) {
        const double c = -W + (q + 0.5) * h;
        for (int k = 0; k < 16; ++k) nodes.push_back({c + 0.5 * h * x[k], 0.5 * h * gl_weight(x[k])});
    }
    cplx sum = 0;
    for (int sign : {1, -1}) {
        std::vector<std::pair<double, double>> side;
        for (auto nd : nodes)
            if ((sign > 0) == (nd.first > 0)) side.push_back(nd);
        std::sort(side.begin(), side.end(),
                  [](auto a, auto b) { return std::abs(a.first) < std::abs(b.first); });
        Flow fl(i, f, p, eps * omega);
        for (auto [w, wt] : side) {
            fl.step_to(w);
            sum += wt * std::exp(-omega * w * w) * fl.dt_dw(fl.t(), w);
        }
    }
    return sum;
}

}  // namespace

Quadrature integrate_swallowtail(const Frame& f, const PhaseParams& p, double eps, double rotation) {
    if (!(eps > 0)) throw Error(ErrorKind::InvalidInput, "eps must be positive");
    Quadrature q;
    double rot = rotation;
    for (int attempt = 0;; ++attempt) {
        try {
            q.weights = contour_weights(f, p, rot);
            break;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SaddleCollision || attempt >= 3) throw;
            rot += 0.05;
        }
    }
    const cplx pre = 1.0 / (I * std::pow(eps, 0.2));
    cplx fine = 0, coarse = 0;
    for (int j = 0; j < kBranches; ++j) {
        if (q.weights[j] == 0) continue;
        const cplx e = std::exp(-f.chi(j) / eps) * double(q.weights[j]);
        fine += e * contour_integral(j, f, p, eps, rot, 32);
        coarse += e * contour_integral(j, f, p, eps, rot, 16);
    }
    q.value = pre * fine;
    q.rel_error = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
    if (!std::isfinite(std::abs(q.value))) throw Error(ErrorKind::QuadratureFailure, "non-finite integral");
    return q;
}

Quadrature integrate_swallowtail(cplx z, const PhaseParams& p, double eps, double rotation) {
    return integrate_swallowtail(frame_at(z, p), p, eps, rotation);
}

cplx far_field(cplx z, double eps) {
    if (z == 0.0) throw Error(ErrorKind::InvalidInput, "far field needs z != 0");
    // Powers of z use arg z in [-pi/2, 3pi/2), so arg z = -3pi/4 is read as 5pi/4.
    double th = std::arg(z);
    if (th < -0.5 * kPi) th += 2 * kPi;
    const cplx lz{std::log(std::abs(z)), th};
    const cplx alpha = std::polar(1.0, 0.75 * kPi);
    const cplx z34 = std::exp(0.75 * lz), z54 = std::exp(1.25 * lz);
    return -I * kSqrtPi / std::sqrt(2.0 * std::pow(5.0, 0.25) * alpha * alpha * alpha * z34) *
           std::exp(-4.0 * alpha * z54 / (std::pow(5.0, 1.25) * eps));
}

double gamma_half(int n) {
    double g = kSqrtPi;
    for (int k = 0; k < n; ++k) g *= k + 0.5;
    return g;
}

double gamma_int(int n) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "Gamma(n) needs n >= 1");
    double g = 1;
    for (int k = 2; k < n; ++k) g *= k;
    return g;
}

std::vector<cplx> late_terms(int n_max, int i, const Frame& f, const PhaseParams& p) {
    if (n_max < 0) throw Error(ErrorKind::InvalidInput, "n must be non-negative");
    double dmin = INFINITY;
    for (int k = 0; k < kBranches; ++k)
        if (k != i) dmin = std::min(dmin, std::abs(f.chi(k) - f.chi(i)));
    const double rho = std::sqrt(0.85 * dmin);
    const cplx t0 = -f.tau(i), chi0 = f.chi(i);
    const cplx slope = I / oriented_sqrt_d(f, i);
    auto solve = [&](cplx v, cplx& s) {
        const cplx target = chi0 + v * v;
        for (int it = 0; it < 60; ++it) {
            const cplx step = (phase(t0 + s, f.z, p) - target) / phase_dt(t0 + s, f.z, p);
            s -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(s))) return true;
        }
        return std::abs(phase(t0 + s, f.z, p) - target) <= 1e-12 * std::max(1.0, std::abs(target));
    };
    const int radial = 400, M = 4096;
    cplx s = 1e-3 * rho * slope;
    for (int k = 1; k <= radial; ++k) {
        const double r = rho * (1e-3 + (1 - 1e-3) * double(k) / radial);
        if (!solve(r, s)) throw Error(ErrorKind::LoopTooWide, "late-term loop left the saddle basin");
    }
    std::vector<cplx> vs(M), dsdv(M);
    const cplx s_start = s;
    for (int m = 0; m < M; ++m) {
        const cplx v = std::polar(rho, 2 * kPi * m / M);
        if (m > 0 && !solve(v, s)) throw Error(ErrorKind::LoopTooWide, "late-term loop left the saddle basin");
        vs[m] = v;
        dsdv[m] = 2.0 * v / phase_dt(t0 + s, f.z, p);
    }
    cplx s_end = s;
    if (!solve(rho, s_end) || std::abs(s_end - s_start) > 1e-8 * std::max(1.0, std::abs(s_start)))
        throw Error(ErrorKind::LoopTooWide, "late-term loop encloses another branch point");
    std::vector<cplx> out(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        cplx c = 0;
        for (int m = 0; m < M; ++m) c += dsdv[m] * std::pow(vs[m], -2 * n);
        c /= double(M);
        out[n] = -I * gamma_half(n) * c;
    }
    return out;
}

cplx late_term(int n, int i, const Frame& f, const PhaseParams& p) { return late_terms(n, i, f, p).back(); }

LimitEstimate stokes_constant_limit(int i, int j, const Frame& f, const PhaseParams& p, int n_max,
                                    const std::vector<std::pair<int, cplx>>& subtract) {
    if (n_max < 20) throw Error(ErrorKind::InvalidInput, "n_max must be at least 20");
    const auto psi_i = late_terms(n_max, i, f, p);
    const cplx dij = f.chi(j) - f.chi(i);
    std::vector<std::pair<std::vector<cplx>, cplx>> subs;
    for (auto [k, S] : subtract) subs.push_back({late_terms(n_max, k, f, p), S});
    LimitEstimate est;
    for (int n = 1; n <= n_max; ++n) {
        cplx r = psi_i[n];
        for (size_t q = 0; q < subs.size(); ++q) {
            const int k = subtract[q].first;
            const cplx dik = f.chi(k) - f.chi(i);
            cplx acc = 0;
            for (int pp = 0; pp < n; ++pp) acc += gamma_int(n - pp) * subs[q].first[pp] / std::pow(dik, n - pp);
            r -= subs[q].second / (2 * kPi * I) * acc;
        }
        est.raw.push_back(2 * kPi * I * r * std::pow(dij, n) / (gamma_int(n) * f.amp0(j)));
    }
    auto richardson = [&](int m) {
        const int N = n_max;
        cplx R = 0;
        double fact_k = 1;
        for (int k = 0; k <= m; ++k) {
            if (k > 0) fact_k *= k;
            double fact_mk = 1;
            for (int q = 2; q <= m - k; ++q) fact_mk *= q;
            const int n = N - m + k;
            R += est.raw[n - 1] * std::pow(double(n), m) * (((m - k) % 2) ? -1.0 : 1.0) / (fact_k * fact_mk);
        }
        return R;
    };
    est.value = richardson(4);
    est.error = std::abs(est.value - richardson(3));
    if (!std::isfinite(std::abs(est.value)) || est.error > 0.05 * std::max(1.0, std::abs(est.value))) {
        int nearest = -1;
        for (int k = 0; k < kBranches; ++k)
            if (k != i && (nearest < 0 || std::abs(f.chi(k) - f.chi(i)) < std::abs(f.chi(nearest) - f.chi(i))))
                nearest = k;
        throw Error(ErrorKind::NonConvergence, "late terms dominated by pair (" + std::to_string(i + 1) + "," +
                                                   std::to_string(nearest + 1) + ")");
    }
    return est;
}

namespace {

cplx series_sum(int i, const Frame& f, const PhaseParams& p, double eps, int terms) {
    if (terms == 0) return f.amp0(i);
    const int nmax = terms > 0 ? terms : 60;
    const auto psi = late_terms(nmax, i, f, p);
    cplx s = 0;
    double prev = INFINITY;
    for (int n = 0; n <= nmax; ++n) {
        const cplx term = psi[n] * std::pow(eps, n);
        if (terms < 0 && std::abs(term) > prev) break;
        prev = std::abs(term);
        s += term;
    }
    return s;
}

}  // namespace

cplx transseries_sum(const ConnectionState& s, const PhaseParams& p, double eps, const std::vector<double>& beta,
                     int terms) {
    cplx sum = 0;
    for (int i = 0; i < kBranches; ++i) {
        const double sig = s.sigma[i].eval(beta);
        if (sig == 0.0) continue;
        sum += sig * std::exp(-s.frame.chi(i) / eps) * series_sum(i, s.frame, p, eps, terms);
    }
    return sum;
}

Calibration calibrate(const ConnectionState& at_anchor, const PhaseParams& p, double eps,
                      const std::vector<double>& beta, int terms) {
    std::vector<double> mags;
    for (int i = 0; i < kBranches; ++i) {
        const double sig = at_anchor.sigma[i].eval(beta);
        if (sig != 0.0)
            mags.push_back(std::abs(sig * at_anchor.frame.amp0(i)) * std::exp(-at_anchor.frame.chi(i).real() / eps));
    }
    std::sort(mags.rbegin(), mags.rend());
    if (mags.empty() || (mags.size() > 1 && mags[0] < std::exp(5.0) * mags[1]))
        throw Error(ErrorKind::AnchorDegenerate, "no single exponential dominates at the anchor");
    const cplx num = integrate_swallowtail(at_anchor.frame, p, eps).value;
    const cplx ts = transseries_sum(at_anchor, p, eps, beta, terms);
    return {at_anchor.at, num / ts, terms};
}

cplx transseries_eval(const ConnectionState& s, const PhaseParams& p, double eps, const std::vector<double>& beta,
                      const Calibration& cal) {
    return cal.c * transseries_sum(s, p, eps, beta, cal.terms);
}

JumpEstimate extract_subdominant_jump(const ConnectionState& on_line, int i, int j, const PhaseParams& p, double eps,
                                      const std::vector<double>& beta, const Calibration& cal, double angle) {
    const Frame& f0 = on_line.frame;
    if (i == j) throw Error(ErrorKind::IndexError, "jump needs distinct exponentials");
    if ((f0.chi(j) - f0.chi(i)).real() < 0) std::swap(i, j);
    const cplx dtau = f0.tau(j) - f0.tau(i);
    const cplx normal = I * std::conj(dtau) / std::abs(dtau);
    auto at = [&](double s) { return advance(f0, f0.z + s * normal, p); };
    auto arg_of = [&](const Frame& f) { return std::abs(std::arg(f.chi(j) - f.chi(i))); };
    auto find = [&](double sign) {
        double lo = 0, hi = sign * 0.05 * std::abs(f0.chi(j) - f0.chi(i)) / std::abs(dtau);
        for (int it = 0; it < 40 && arg_of(at(hi)) < angle; ++it) hi *= 1.5;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (arg_of(at(mid)) < angle ? lo : hi) = mid;
        }
        return at(0.5 * (lo + hi));
    };
    auto coefficient = [&](const Frame& f) {
        cplx rest = integrate_swallowtail(f, p, eps).value / cal.c;
        for (int k = 0; k < kBranches; ++k) {
            const double sig = on_line.sigma[k].eval(beta);
            if (k != j && sig != 0.0) rest -= sig * std::exp(-f.chi(k) / eps) * series_sum(k, f, p, eps, -1);
        }
        return rest / (std::exp(-f.chi(j) / eps) * series_sum(j, f, p, eps, -1));
    };
    const Frame lo = find(-1.0), hi = find(1.0);
    return {coefficient(lo), coefficient(hi), lo.z, hi.z, i, j};
}

}  // namespace atlas
