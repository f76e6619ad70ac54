#include "carma/aux_ar.hpp"

#include <cmath>
#include <numeric>

#include "guarded_solve.hpp"

namespace carma {

using detail::guarded_solve;

AuxParam link_function(const CarmaSpec& spec, double h, int r) {
    if (r < 2 * spec.p - 1)
        throw std::invalid_argument("link_function: requires r >= 2p-1");
    if (!check_stationarity(spec))
        throw std::invalid_argument("link_function: spec is not stationary");
    if (!check_sampling_identifiability(spec, h))
        throw std::invalid_argument("link_function: spec not identifiable at step h");

    const AcfTable acf = acf_table(spec, h, r);
    Matrix G(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) G(i, j) = acf.values[static_cast<std::size_t>(std::abs(i - j))];
    Vector g(r);
    for (int i = 0; i < r; ++i) g[i] = acf.values[static_cast<std::size_t>(i) + 1];

    AuxParam aux;
    aux.r = r;
    aux.pis = guarded_solve(G, g, "link_function");
    const double sigma2 = acf.values[0] - aux.pis.dot(g);
    aux.sigma = sigma2 > 0.0 ? std::sqrt(sigma2) : 0.0;
    return aux;
}

AuxParam link_function(const Vector& theta, const ModelFamily& family, double h, int r,
                       double sigma_L2) {
    return link_function(build_state_space(theta, family, sigma_L2), h, r);
}

double sample_autocov(const SampledSeries& series, int l, int j, int r) {
    const std::size_t n = series.values.size();
    if (n <= static_cast<std::size_t>(r))
        throw std::invalid_argument("sample_autocov: series too short for order r");
    if (l < 0 || j < 0 || l > r || j > r)
        throw std::invalid_argument("sample_autocov: indices must lie in {0,...,r}");
    const std::size_t m = n - static_cast<std::size_t>(r);
    double acc = 0.0;
    const double* y = series.values.data();
    for (std::size_t k = 0; k < m; ++k) acc += y[k + static_cast<std::size_t>(l)] * y[k + static_cast<std::size_t>(j)];
    return acc / static_cast<double>(m);
}

AuxParam ls_estimate(const SampledSeries& series, int r) {
    const std::size_t n = series.values.size();
    if (n <= static_cast<std::size_t>(r) + 1)
        throw std::invalid_argument("ls_estimate: series too short for order r");
    const std::size_t m = n - static_cast<std::size_t>(r);
    const double* y = series.values.data();

    // normal equations: M[i][j] = ghat(r-i, r-j), v[i] = ghat(r, r-i), 1-based i,j
    Matrix M = Matrix::Zero(r, r);
    Vector v = Vector::Zero(r);
    for (std::size_t k = 0; k < m; ++k) {
        const double target = y[k + static_cast<std::size_t>(r)];
        for (int i = 1; i <= r; ++i) {
            const double yi = y[k + static_cast<std::size_t>(r - i)];
            v[i - 1] += yi * target;
            for (int j = i; j <= r; ++j) M(i - 1, j - 1) += yi * y[k + static_cast<std::size_t>(r - j)];
        }
    }
    const double scale = static_cast<double>(m);
    M /= scale;
    v /= scale;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < i; ++j) M(i, j) = M(j, i);

    AuxParam aux;
    aux.r = r;
    aux.pis = guarded_solve(M, v, "ls_estimate");

    double rss = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double pred = 0.0;
        for (int i = 1; i <= r; ++i) pred += aux.pis[i - 1] * y[k + static_cast<std::size_t>(r - i)];
        const double e = y[k + static_cast<std::size_t>(r)] - pred;
        rss += e * e;
    }
    const double sigma2 = rss / scale;
    aux.sigma = sigma2 > 0.0 ? std::sqrt(sigma2) : 0.0;
    return aux;
}

void demean(SampledSeries& series) {
    if (series.values.empty()) return;
    const double mean =
        std::accumulate(series.values.begin(), series.values.end(), 0.0) /
        static_cast<double>(series.values.size());
    for (auto& v : series.values) v -= mean;
}

}  // namespace carma
