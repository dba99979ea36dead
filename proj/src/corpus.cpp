#include "hslab/corpus.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace hslab::corpus {

namespace {

MetricMeasureSpace from_coords(std::string name,
                               const std::vector<std::vector<double>>& pts,
                               std::vector<double> weights) {
    const int n = static_cast<int>(pts.size());
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (size_t k = 0; k < pts[i].size(); ++k) {
                const double t = pts[i][k] - pts[j][k];
                s += t * t;
            }
            d[i][j] = d[j][i] = std::sqrt(s);
        }
    return MetricMeasureSpace(std::move(name), std::move(d), std::move(weights), pts);
}

} // namespace

MetricMeasureSpace grid(int dim, int n) {
    if ((dim != 1 && dim != 2) || n < 2)
        throw Error(Errc::bad_params, "grid needs dim in {1,2} and n >= 2");
    std::vector<std::vector<double>> pts;
    const double h = 1.0 / (n - 1);
    if (dim == 1) {
        for (int i = 0; i < n; ++i) pts.push_back({i * h});
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) pts.push_back({i * h, j * h});
    }
    const double w = std::pow(static_cast<double>(n), -dim);
    return from_coords("grid(" + std::to_string(dim) + "," + std::to_string(n) + ")", pts,
                       std::vector<double>(pts.size(), w));
}

MetricMeasureSpace cantor(int level) {
    if (level < 1 || level > 8) throw Error(Errc::bad_params, "cantor level must be in [1,8]");
    // Left endpoints are sums of 2/3^i over bit patterns; kept sorted by
    // generating patterns most-significant-first.
    std::vector<std::vector<double>> pts;
    const int m = 1 << level;
    const double denom = std::pow(3.0, level);
    for (int b = 0; b < m; ++b) {
        long long num = 0;
        long long p3 = static_cast<long long>(denom) / 3;
        for (int i = 0; i < level; ++i) {
            if (b & (1 << (level - 1 - i))) num += 2 * p3;
            p3 /= 3;
        }
        pts.push_back({static_cast<double>(num) / denom});
    }
    return from_coords("cantor(" + std::to_string(level) + ")", pts,
                       std::vector<double>(pts.size(), 1.0 / m));
}

MetricMeasureSpace snowflake(const MetricMeasureSpace& space, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::bad_params, "snowflake needs alpha in (0,1)");
    const int n = space.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) d[i][j] = std::pow(space.dist(i, j), alpha);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = space.weight(i);
    return MetricMeasureSpace(space.name() + "^" + std::to_string(alpha), std::move(d), std::move(w));
}

MetricMeasureSpace vanishing_density(int n, double beta) {
    if (n < 4 || !(beta > 0.0)) throw Error(Errc::bad_params, "vanishing_density needs n >= 4, beta > 0");
    std::vector<std::vector<double>> pts;
    std::vector<double> w(n);
    double total = 0.0;
    for (int i = 1; i <= n; ++i) {
        pts.push_back({static_cast<double>(i) / n});
        w[i - 1] = std::pow(static_cast<double>(i) / n, beta);
        total += w[i - 1];
    }
    for (auto& x : w) x /= total;
    return from_coords("vdensity(" + std::to_string(n) + ")", pts, std::move(w));
}

MetricMeasureSpace random_space(int n, unsigned long long seed) {
    if (n < 2) throw Error(Errc::bad_params, "random_space needs n >= 2");
    std::mt19937_64 gen(seed);
    auto unit = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::vector<std::vector<double>> pts;
    pts.reserve(n);
    while (static_cast<int>(pts.size()) < n) {
        std::vector<double> p{unit(), unit()};
        bool dup = false; // coincident points would break the metric axioms
        for (const auto& q : pts)
            if (q[0] == p[0] && q[1] == p[1]) dup = true;
        if (!dup) pts.push_back(std::move(p));
    }
    return from_coords("random(" + std::to_string(n) + "," + std::to_string(seed) + ")", pts,
                       std::vector<double>(n, 1.0 / n));
}

MetricMeasureSpace scale_distances(const MetricMeasureSpace& space, double c) {
    if (!(c > 0.0)) throw Error(Errc::bad_params, "distance scale must be positive");
    const int n = space.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) d[i][j] = c * space.dist(i, j);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = space.weight(i);
    return MetricMeasureSpace(space.name() + "*d", std::move(d), std::move(w));
}

MetricMeasureSpace scale_weights(const MetricMeasureSpace& space, double c) {
    if (!(c > 0.0)) throw Error(Errc::bad_params, "weight scale must be positive");
    const int n = space.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = space.dist(i, j);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c * space.weight(i);
    return MetricMeasureSpace(space.name() + "*w", std::move(d), std::move(w));
}

} // namespace hslab::corpus
