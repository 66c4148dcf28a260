#pragma once

#include <cstddef>
#include <random>

#include "qnehari/quat.hpp"
#include "qnehari/rng.hpp"
#include "qnehari/series.hpp"

namespace qtest {

using qnehari::Quaternion;
using qnehari::TruncatedSeries;

inline Quaternion random_quat(std::mt19937_64& rng, double scale = 1.0) {
    return Quaternion{2.0 * qnehari::uniform01(rng) - 1.0, 2.0 * qnehari::uniform01(rng) - 1.0,
                      2.0 * qnehari::uniform01(rng) - 1.0, 2.0 * qnehari::uniform01(rng) - 1.0} *
           scale;
}

inline TruncatedSeries random_series(std::mt19937_64& rng, std::size_t deg, double scale = 1.0) {
    std::vector<Quaternion> c(deg + 1);
    for (auto& a : c) a = random_quat(rng, scale);
    return TruncatedSeries(std::move(c));
}

/// Point of the open ball with |q| <= radius.
inline Quaternion random_ball_point(std::mt19937_64& rng, double radius) {
    Quaternion q = random_quat(rng);
    return q * (radius * qnehari::uniform01(rng) / q.norm());
}

inline double dist(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

inline double max_coeff_dist(const TruncatedSeries& f, const TruncatedSeries& g) {
    const std::size_t n = std::max(f.size(), g.size());
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) m = std::max(m, dist(f[k], g[k]));
    return m;
}

}  // namespace qtest
