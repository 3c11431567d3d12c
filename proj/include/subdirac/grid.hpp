#pragma once

#include <array>
#include <functional>
#include <vector>

#include "core.hpp"

namespace subdirac {

struct GridAxis {
    int size = 1;
    double origin = 0.0;
    double step = 0.0;
    bool periodic = false;
};

/// Uniform rectangular lattice with one or two axes. Axis 0 is the slow
/// (outer) index, axis 1 the fast one; one-dimensional grids use axis 0 only.
struct Grid {
    int dim = 1;
    std::array<GridAxis, 2> axis{};

    int size(int a) const { return axis[static_cast<size_t>(a)].size; }
    double step(int a) const { return axis[static_cast<size_t>(a)].step; }
    bool periodic(int a) const { return axis[static_cast<size_t>(a)].periodic; }

    int count() const { return dim == 1 ? axis[0].size : axis[0].size * axis[1].size; }

    int flat(int i, int j = 0) const { return dim == 1 ? i : i * axis[1].size + j; }

    double coord(int a, int idx) const {
        return axis[static_cast<size_t>(a)].origin + axis[static_cast<size_t>(a)].step * idx;
    }

    /// True when the sample is at least `margin` interior along every
    /// non-periodic axis.
    bool interior(int i, int j, int margin) const {
        auto ok = [&](int a, int idx) {
            if (periodic(a)) return true;
            return idx >= margin && idx < size(a) - margin;
        };
        if (!ok(0, i)) return false;
        if (dim == 2 && !ok(1, j)) return false;
        return true;
    }

    static Grid line(int n, double origin, double step, bool periodic) {
        Grid g;
        g.dim = 1;
        g.axis[0] = {n, origin, step, periodic};
        return g;
    }

    static Grid rect(int n0, double o0, double h0, bool p0, int n1, double o1, double h1, bool p1) {
        Grid g;
        g.dim = 2;
        g.axis[0] = {n0, o0, h0, p0};
        g.axis[1] = {n1, o1, h1, p1};
        return g;
    }
};

template <class T>
struct Field {
    Grid grid;
    std::vector<T> data;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), data(static_cast<size_t>(g.count())) {}
    Field(const Grid& g, const T& init) : grid(g), data(static_cast<size_t>(g.count()), init) {}

    T& at(int i, int j = 0) { return data[static_cast<size_t>(grid.flat(i, j))]; }
    const T& at(int i, int j = 0) const { return data[static_cast<size_t>(grid.flat(i, j))]; }

    template <class F>
    void for_each(F&& fn) {
        const int n0 = grid.size(0);
        const int n1 = grid.dim == 2 ? grid.size(1) : 1;
        for (int i = 0; i < n0; ++i)
            for (int j = 0; j < n1; ++j) fn(i, j, at(i, j));
    }
    template <class F>
    void for_each(F&& fn) const {
        const int n0 = grid.size(0);
        const int n1 = grid.dim == 2 ? grid.size(1) : 1;
        for (int i = 0; i < n0; ++i)
            for (int j = 0; j < n1; ++j) fn(i, j, at(i, j));
    }
};

namespace stencil {

/// Neighbor sample along an axis with periodic wrap; `phase` receives the
/// boundary factor picked up when the lookup crosses a periodic seam (used
/// for fields living in a twisted spinor bundle; +1 for plain fields).
template <class T, class S>
T sample(const Field<T>& f, int i, int j, int axis, int off, S seam_phase, S& phase) {
    const Grid& g = f.grid;
    int idx[2] = {i, j};
    idx[axis] += off;
    phase = S(1);
    const int n = g.size(axis);
    if (g.periodic(axis)) {
        while (idx[axis] < 0) {
            idx[axis] += n;
            phase *= seam_phase;
        }
        while (idx[axis] >= n) {
            idx[axis] -= n;
            phase *= seam_phase;
        }
    }
    return f.at(idx[0], idx[1]);
}

/// Second-order first derivative along an axis. Central stencils inside and
/// across periodic seams, one-sided second-order stencils at open ends.
template <class T, class S = double>
T d1(const Field<T>& f, int i, int j, int axis, S seam_phase = S(1)) {
    const Grid& g = f.grid;
    const double h = g.step(axis);
    const int n = g.size(axis);
    const int idx = (axis == 0) ? i : j;
    S ph_p, ph_m;
    if (g.periodic(axis) || (idx > 0 && idx < n - 1)) {
        T fp = sample(f, i, j, axis, +1, seam_phase, ph_p);
        T fm = sample(f, i, j, axis, -1, seam_phase, ph_m);
        return (ph_p * fp - ph_m * fm) * (1.0 / (2.0 * h));
    }
    if (idx == 0) {
        T f0 = f.at(i, j);
        T f1 = sample(f, i, j, axis, +1, seam_phase, ph_p);
        T f2 = sample(f, i, j, axis, +2, seam_phase, ph_m);
        return (f0 * -3.0 + f1 * 4.0 - f2 * 1.0) * (1.0 / (2.0 * h));
    }
    T f0 = f.at(i, j);
    T f1 = sample(f, i, j, axis, -1, seam_phase, ph_p);
    T f2 = sample(f, i, j, axis, -2, seam_phase, ph_m);
    return (f0 * 3.0 - f1 * 4.0 + f2 * 1.0) * (1.0 / (2.0 * h));
}

/// Second-order second derivative along an axis.
template <class T, class S = double>
T d2(const Field<T>& f, int i, int j, int axis, S seam_phase = S(1)) {
    const Grid& g = f.grid;
    const double h = g.step(axis);
    const int n = g.size(axis);
    const int idx = (axis == 0) ? i : j;
    S ph_p, ph_m;
    if (g.periodic(axis) || (idx > 0 && idx < n - 1)) {
        T fp = sample(f, i, j, axis, +1, seam_phase, ph_p);
        T fm = sample(f, i, j, axis, -1, seam_phase, ph_m);
        T f0 = f.at(i, j);
        return (ph_p * fp - f0 * 2.0 + ph_m * fm) * (1.0 / (h * h));
    }
    S p1, p2, p3;
    if (idx == 0) {
        T f0 = f.at(i, j);
        T f1 = sample(f, i, j, axis, +1, seam_phase, p1);
        T f2 = sample(f, i, j, axis, +2, seam_phase, p2);
        T f3 = sample(f, i, j, axis, +3, seam_phase, p3);
        return (f0 * 2.0 - f1 * 5.0 + f2 * 4.0 - f3 * 1.0) * (1.0 / (h * h));
    }
    T f0 = f.at(i, j);
    T f1 = sample(f, i, j, axis, -1, seam_phase, p1);
    T f2 = sample(f, i, j, axis, -2, seam_phase, p2);
    T f3 = sample(f, i, j, axis, -3, seam_phase, p3);
    return (f0 * 2.0 - f1 * 5.0 + f2 * 4.0 - f3 * 1.0) * (1.0 / (h * h));
}

/// Mixed second derivative for two-dimensional grids.
template <class T>
T d1d1(const Field<T>& f, int i, int j) {
    const Grid& g = f.grid;
    auto dy = [&](int ii, int jj) { return d1(f, ii, jj, 1); };
    const double h0 = g.step(0);
    const int n0 = g.size(0);
    if (g.periodic(0) || (i > 0 && i < n0 - 1)) {
        int ip = i + 1, im = i - 1;
        if (g.periodic(0)) {
            ip = (ip + n0) % n0;
            im = (im + n0) % n0;
        }
        return (dy(ip, j) - dy(im, j)) * (1.0 / (2.0 * h0));
    }
    if (i == 0) return (dy(0, j) * -3.0 + dy(1, j) * 4.0 - dy(2, j) * 1.0) * (1.0 / (2.0 * h0));
    return (dy(i, j) * 3.0 - dy(i - 1, j) * 4.0 + dy(i - 2, j) * 1.0) * (1.0 / (2.0 * h0));
}

} // namespace stencil

} // namespace subdirac
