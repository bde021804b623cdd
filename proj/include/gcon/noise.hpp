#pragma once

#include "gcon/graph.hpp"
#include "gcon/rng.hpp"

#include <cstdint>
#include <vector>

namespace gcon {

struct NoiseMatrix {
    Matrix B;                   // d x c, column j has norm radii[j]
    std::vector<double> radii;  // one Erlang(d, beta) draw per column
    std::uint64_t seed = 0;
};

// Erlang(shape d, rate beta) as the sum of d exponentials; exact for
// integer shape.
double sample_radius(int d, double beta, Rng& rng);

// Uniform direction on the d-sphere (normalized standard-normal vector)
// scaled to an Erlang radius.
Vector sample_noise_column(int d, double beta, Rng& rng);

// c independent columns. beta = +inf is the no-noise sentinel and yields
// the zero matrix.
NoiseMatrix sample_noise_matrix(int d, int c, double beta, std::uint64_t seed);

} // namespace gcon
