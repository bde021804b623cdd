#include "gcon/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace gcon {

double sample_radius(int d, double beta, Rng& rng) {
    if (d < 1) throw std::invalid_argument("dimension must be a positive integer");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    double r = 0.0;
    for (int i = 0; i < d; ++i) r += rng.exponential(beta);
    return r;
}

Vector sample_noise_column(int d, double beta, Rng& rng) {
    const double radius = sample_radius(d, beta, rng);
    Vector u(d);
    double norm;
    do {
        for (int i = 0; i < d; ++i) u(i) = rng.normal();
        norm = u.norm();
    } while (norm == 0.0);
    return (radius / norm) * u;
}

NoiseMatrix sample_noise_matrix(int d, int c, double beta, std::uint64_t seed) {
    if (c < 1) throw std::invalid_argument("column count must be positive");
    NoiseMatrix out;
    out.seed = seed;
    out.B = Matrix::Zero(d, c);
    out.radii.assign(c, 0.0);
    if (std::isinf(beta)) return out; // no-noise path

    Rng rng = Rng(seed).child(0x6e6f697365ULL); // "noise" stream
    for (int j = 0; j < c; ++j) {
        Vector col = sample_noise_column(d, beta, rng);
        out.B.col(j) = col;
        out.radii[j] = col.norm();
    }
    return out;
}

} // namespace gcon
