#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

#include "surfframe/errors.hpp"
#include "surfframe/geometry.hpp"

namespace surfframe {

struct FrequencyTag {
    int class_id = -1;
    Eigen::VectorXi lattice;  // base-lattice index the frequency sits over
    int phase = 0;            // phase-set element index (1-based), 0 = none
};

namespace detail {

inline std::vector<int> lex_order(const Matrix& rows) {
    std::vector<int> idx(rows.rows());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        for (int j = 0; j < rows.cols(); ++j) {
            if (rows(a, j) < rows(b, j)) return true;
            if (rows(a, j) > rows(b, j)) return false;
        }
        return false;
    });
    return idx;
}

/// Spatial hash over cells of size `cell` (up to 3 spatial coordinates packed
/// into one 64-bit key).
struct CellHash {
    double cell;
    explicit CellHash(double c) : cell(c) {}
    std::uint64_t key(const Matrix& pts, int i) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int j = 0; j < pts.cols(); ++j) {
            auto c = static_cast<std::int64_t>(std::floor(pts(i, j) / cell));
            h ^= static_cast<std::uint64_t>(c + 0x200000);
            h *= 1099511628211ull;
        }
        return h;
    }
    std::uint64_t shifted_key(const Matrix& pts, int i, const int* off) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int j = 0; j < pts.cols(); ++j) {
            auto c = static_cast<std::int64_t>(std::floor(pts(i, j) / cell)) + off[j];
            h ^= static_cast<std::uint64_t>(c + 0x200000);
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Minimum pairwise distance below `radius`, via a spatial hash; returns
/// nullopt when all pairs are at least `radius` apart. O(n) for separated sets.
inline std::optional<double> min_distance_below(const Matrix& pts, double radius) {
    const int n = static_cast<int>(pts.rows());
    const int d = static_cast<int>(pts.cols());
    if (n < 2) return std::nullopt;
    CellHash hash(radius);
    std::unordered_map<std::uint64_t, std::vector<int>> grid;
    grid.reserve(2 * n);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> off(d);
    for (int i = 0; i < n; ++i) {
        std::fill(off.begin(), off.end(), -1);
        while (true) {
            auto it = grid.find(hash.shifted_key(pts, i, off.data()));
            if (it != grid.end()) {
                for (int other : it->second) {
                    double dist = (pts.row(i) - pts.row(other)).norm();
                    best = std::min(best, dist);
                }
            }
            int j = 0;
            for (; j < d; ++j) {
                if (++off[j] <= 1) break;
                off[j] = -1;
            }
            if (j == d) break;
        }
        grid[hash.key(pts, i)].push_back(i);
    }
    if (best < radius) return best;
    return std::nullopt;
}

}  // namespace detail

/// Finite tagged frequency set. Distinctness is asserted on construction;
/// when `delta` is given, pairwise delta-separation is asserted too.
struct Spectrum {
    Matrix frequencies;  // n x d
    std::vector<FrequencyTag> tags;  // empty, or one per frequency
    std::optional<double> delta;
    double window_radius = 0;

    Spectrum() = default;
    Spectrum(Matrix freq, std::optional<double> delta_ = std::nullopt,
             double window = 0, std::vector<FrequencyTag> tags_ = {})
        : frequencies(std::move(freq)), tags(std::move(tags_)), delta(delta_),
          window_radius(window) {
        if (!tags.empty() && static_cast<long>(tags.size()) != frequencies.rows())
            throw SpectrumInvariantViolation("spectrum: tag count mismatch");
        auto order = detail::lex_order(frequencies);
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            double diff = (frequencies.row(order[i]) - frequencies.row(order[i + 1]))
                              .cwiseAbs().maxCoeff();
            if (diff < 1e-12)
                throw SpectrumInvariantViolation("spectrum: duplicate frequency");
        }
        if (delta) {
            if (!(*delta > 0)) throw SpectrumInvariantViolation("spectrum: delta must be positive");
            auto bad = detail::min_distance_below(frequencies, *delta * (1.0 - 1e-12));
            if (bad)
                throw SpectrumInvariantViolation(
                    "spectrum: pair at distance " + std::to_string(*bad) +
                    " violates separation " + std::to_string(*delta));
        }
    }

    int size() const { return static_cast<int>(frequencies.rows()); }
    int dim() const { return static_cast<int>(frequencies.cols()); }

    double max_norm() const {
        double m = 0;
        for (int i = 0; i < size(); ++i) m = std::max(m, frequencies.row(i).norm());
        return m;
    }

    double max_coordinate() const {
        return size() ? frequencies.cwiseAbs().maxCoeff() : 0.0;
    }

    Vector row(int i) const { return frequencies.row(i).transpose(); }
};

/// Z^d ∩ closed ball of radius R, sorted by (norm, lexicographic) so the
/// enumeration order is reproducible.
inline Spectrum lattice_ball(int d, double R) {
    std::vector<Eigen::VectorXi> pts;
    Eigen::VectorXi lo = Eigen::VectorXi::Constant(d, -static_cast<int>(std::floor(R)));
    Eigen::VectorXi cur = lo;
    const int hi = static_cast<int>(std::floor(R));
    while (true) {
        double n2 = 0;
        for (int j = 0; j < d; ++j) n2 += double(cur[j]) * cur[j];
        if (n2 <= R * R + 1e-12) pts.push_back(cur);
        int j = 0;
        for (; j < d; ++j) {
            if (++cur[j] <= hi) break;
            cur[j] = lo[j];
        }
        if (j == d) break;
    }
    std::sort(pts.begin(), pts.end(), [](const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
        long na = a.cast<long>().squaredNorm(), nb = b.cast<long>().squaredNorm();
        if (na != nb) return na < nb;
        for (int j = 0; j < a.size(); ++j)
            if (a[j] != b[j]) return a[j] < b[j];
        return false;
    });
    Matrix freq(pts.size(), d);
    std::vector<FrequencyTag> tags(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        freq.row(i) = pts[i].cast<double>().transpose();
        tags[i] = FrequencyTag{0, pts[i], 0};
    }
    return Spectrum(std::move(freq), 1.0, R, std::move(tags));
}

/// Drop the requested frequency (exact match) from a spectrum.
inline Spectrum remove_frequency(const Spectrum& s, const Vector& freq) {
    std::vector<int> keep;
    for (int i = 0; i < s.size(); ++i)
        if ((s.row(i) - freq).cwiseAbs().maxCoeff() > 1e-12) keep.push_back(i);
    Matrix f(keep.size(), s.dim());
    std::vector<FrequencyTag> tags;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        f.row(i) = s.frequencies.row(keep[i]);
        if (!s.tags.empty()) tags.push_back(s.tags[keep[i]]);
    }
    return Spectrum(std::move(f), s.delta, s.window_radius, std::move(tags));
}

}  // namespace surfframe
