#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "surfframe/errors.hpp"
#include "surfframe/spectrum.hpp"

namespace surfframe {

// The same averaging construction on the flat torus R^2/Z^2, where everything
// is exact: eigenfunctions are the exponentials e_m, a rational-translation
// group averages them by the scalar (1/#G) sum_v e^{2 pi i m.v}, which is 1
// when m annihilates every translation and 0 otherwise. The fixed basis is
// therefore the dual lattice of the refined translation lattice, restricted
// to a fundamental domain of the action.

struct TorusTranslationGroup {
    std::vector<Vector> shifts;  // includes the zero shift

    int order() const { return static_cast<int>(shifts.size()); }
};

/// Close a set of rational generators under addition mod 1.
inline TorusTranslationGroup torus_translation_group(const std::vector<Vector>& generators) {
    TorusTranslationGroup g;
    g.shifts.push_back(Vector::Zero(generators.empty() ? 2 : generators.front().size()));
    auto mod1 = [](Vector v) {
        for (int i = 0; i < v.size(); ++i) {
            v[i] -= std::floor(v[i]);
            if (v[i] > 1.0 - 1e-12) v[i] = 0.0;
        }
        return v;
    };
    auto contains = [&](const Vector& v) {
        for (const auto& s : g.shifts)
            if ((s - v).cwiseAbs().maxCoeff() < 1e-12) return true;
        return false;
    };
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Vector> next;
        for (const auto& s : g.shifts)
            for (const auto& gen : generators) {
                Vector v = mod1(s + gen);
                if (!contains(v)) { next.push_back(v); grew = true; }
            }
        for (auto& v : next)
            if (!contains(v)) g.shifts.push_back(std::move(v));
        if (g.shifts.size() > 4096)
            throw Error("torus_translation_group: generators are not rational enough");
    }
    return g;
}

/// Averaging coefficient of e_m: 1 if m is fixed, 0 otherwise (exact up to
/// roundoff in the phase sum).
inline double torus_projector_coefficient(const TorusTranslationGroup& g,
                                          const Eigen::VectorXi& m) {
    Complex acc(0, 0);
    for (const auto& s : g.shifts) {
        double ph = 2.0 * M_PI * m.cast<double>().dot(s);
        acc += Complex(std::cos(ph), std::sin(ph));
    }
    return std::abs(acc) / g.order();
}

/// Frequencies m in Z^d ∩ B_R fixed by the group (the dual of the refined
/// lattice Z^d + shifts).
inline std::vector<Eigen::VectorXi> torus_fixed_frequencies(const TorusTranslationGroup& g,
                                                            double R) {
    const int d = static_cast<int>(g.shifts.front().size());
    Spectrum ball = lattice_ball(d, R);
    std::vector<Eigen::VectorXi> fixed;
    for (const auto& tag : ball.tags) {
        double c = torus_projector_coefficient(g, tag.lattice);
        if (c > 0.99) fixed.push_back(tag.lattice);
        else if (c > 1e-9)
            throw Error("torus projector coefficient off the {0,1} cluster");
    }
    return fixed;
}

/// <e_m, e_m'> over the box [0, s1) x [0, s2) x ..., in closed form.
inline Complex torus_box_inner(const Eigen::VectorXi& m, const Eigen::VectorXi& mp,
                               const Vector& box) {
    Complex out(1, 0);
    for (int i = 0; i < box.size(); ++i) {
        double k = m[i] - mp[i];
        if (std::abs(k) < 1e-15) { out *= box[i]; continue; }
        // int_0^s e^{2 pi i k x} dx
        double a = 2.0 * M_PI * k * box[i];
        out *= Complex(std::sin(a), 1.0 - std::cos(a)) / (2.0 * M_PI * k);
    }
    return out;
}

}  // namespace surfframe
