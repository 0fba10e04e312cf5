#ifndef RAMIFLOW_NEWTON_HPP
#define RAMIFLOW_NEWTON_HPP

#include <vector>

#include "ramiflow/series.hpp"

namespace ramiflow {

// Lower convex hull of the points (exponent, valuation).  Vertices are kept
// in increasing exponent order; collinear interior points are dropped.
struct NewtonPolygon {
    struct Vertex {
        long exp;
        Rat val;
    };
    std::vector<Vertex> vertices;

    // slope of edge i (between vertex i and i+1)
    Rat edge_slope(size_t i) const {
        return (vertices[i + 1].val - vertices[i].val) / Rat(vertices[i + 1].exp - vertices[i].exp);
    }

    // radii where the active vertex changes: t = -slope, decreasing in slope
    // order means increasing exponent takes over as t decreases.
    std::vector<Rat> breakpoints() const {
        std::vector<Rat> b;
        for (size_t i = 0; i + 1 < vertices.size(); ++i) b.push_back(-edge_slope(i));
        return b;  // strictly decreasing along increasing exponent
    }

    // vertex attaining min(val + exp*t) at radius t; on a tie the smaller
    // exponent wins (matches the residue order at the origin).
    const Vertex& active_vertex(const Rat& t) const {
        size_t best = 0;
        Rat bv = vertices[0].val + t * vertices[0].exp;
        for (size_t i = 1; i < vertices.size(); ++i) {
            Rat v = vertices[i].val + t * vertices[i].exp;
            if (v < bv) {
                bv = v;
                best = i;
            }
        }
        return vertices[best];
    }
};

inline NewtonPolygon newton_polygon(const ValuedSeries& f) {
    if (f.terms().empty()) throw err(Error::Code::ZeroInput, "newton polygon of zero");
    std::vector<NewtonPolygon::Vertex> pts;
    for (const auto& [n, c] : f.terms()) pts.push_back({n, c.valuation()});
    // monotone chain, keeping the lower hull; strict turns only
    std::vector<NewtonPolygon::Vertex> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // cross product of (b-a) x (p-a); keep b only on a strict right turn
            Rat cross = Rat(b.exp - a.exp) * (p.val - a.val) - (b.val - a.val) * Rat(p.exp - a.exp);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return NewtonPolygon{hull};
}

}  // namespace ramiflow

#endif
