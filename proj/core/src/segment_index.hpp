#pragma once

#include <algorithm>
#include <vector>

#include "atlas/geometry.hpp"

namespace atlas {

struct SegmentRef {
    int curve;
    int seg;
};

// Uniform grid over the domain; each cell lists the curve segments whose
// bounding box overlaps it.
class SegmentIndex {
public:
    SegmentIndex(const std::vector<StokesCurve>& curves, const Domain& d, int cells = 512);

    template <class F>
    void query(cplx p0, cplx p1, F&& f) const {
        int cx0, cy0, cx1, cy1;
        cell_range(p0, p1, cx0, cy0, cx1, cy1);
        if (cx0 > cx1 || cy0 > cy1) return;
        std::vector<int> ids;
        for (int cy = cy0; cy <= cy1; ++cy)
            for (int cx = cx0; cx <= cx1; ++cx) {
                const auto& c = cells_[size_t(cy) * n_ + size_t(cx)];
                ids.insert(ids.end(), c.begin(), c.end());
            }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (int id : ids) f(refs_[id]);
    }

private:
    void cell_range(cplx p0, cplx p1, int& cx0, int& cy0, int& cx1, int& cy1) const;

    Domain d_;
    int n_;
    double sx_, sy_;
    std::vector<SegmentRef> refs_;
    std::vector<std::vector<int>> cells_;
};

// Proper transversal intersection of [p0,p1] and [q0,q1]; returns
// parameters along each segment.
bool segment_intersection(cplx p0, cplx p1, cplx q0, cplx q1, double& s, double& u);

}  // namespace atlas
