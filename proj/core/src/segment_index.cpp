#include "segment_index.hpp"

#include <cmath>

namespace atlas {

SegmentIndex::SegmentIndex(const std::vector<StokesCurve>& curves, const Domain& d, int cells)
    : d_(d), n_(cells) {
    sx_ = (d.x1 - d.x0) / n_;
    sy_ = (d.y1 - d.y0) / n_;
    cells_.assign(size_t(n_) * n_, {});
    for (int c = 0; c < int(curves.size()); ++c) {
        const auto& pts = curves[c].pts;
        for (int s = 0; s + 1 < int(pts.size()); ++s) {
            int cx0, cy0, cx1, cy1;
            cell_range(pts[s], pts[s + 1], cx0, cy0, cx1, cy1);
            if (cx0 > cx1 || cy0 > cy1) continue;
            const int id = int(refs_.size());
            refs_.push_back({c, s});
            for (int cy = cy0; cy <= cy1; ++cy)
                for (int cx = cx0; cx <= cx1; ++cx) cells_[size_t(cy) * n_ + size_t(cx)].push_back(id);
        }
    }
}

void SegmentIndex::cell_range(cplx p0, cplx p1, int& cx0, int& cy0, int& cx1, int& cy1) const {
    const double xa = std::min(p0.real(), p1.real()), xb = std::max(p0.real(), p1.real());
    const double ya = std::min(p0.imag(), p1.imag()), yb = std::max(p0.imag(), p1.imag());
    auto clampi = [this](double v) { return std::max(0, std::min(n_ - 1, int(std::floor(v)))); };
    if (xb < d_.x0 || xa > d_.x1 || yb < d_.y0 || ya > d_.y1) {
        cx0 = cy0 = 1;
        cx1 = cy1 = 0;
        return;
    }
    cx0 = clampi((xa - d_.x0) / sx_ - 1e-9);
    cx1 = clampi((xb - d_.x0) / sx_ + 1e-9);
    cy0 = clampi((ya - d_.y0) / sy_ - 1e-9);
    cy1 = clampi((yb - d_.y0) / sy_ + 1e-9);
}

bool segment_intersection(cplx p0, cplx p1, cplx q0, cplx q1, double& s, double& u) {
    const cplx d = p1 - p0, e = q1 - q0, w = q0 - p0;
    const double den = d.real() * e.imag() - d.imag() * e.real();
    if (std::abs(den) <= 1e-10 * std::abs(d) * std::abs(e)) return false;
    s = (w.real() * e.imag() - w.imag() * e.real()) / den;
    u = (w.real() * d.imag() - w.imag() * d.real()) / den;
    return s >= 0.0 && s < 1.0 && u >= 0.0 && u < 1.0;
}

}  // namespace atlas
