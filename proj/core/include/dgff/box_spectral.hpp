#pragma once

#include <Eigen/Dense>

#include "dgff/random.hpp"

namespace dgff {

// Exact spectral calculus for the Dirichlet walk on an open rectangle with
// `width` × `height` interior vertices, stored row-major (index = y·width + x).
// Eigenfunctions are products of sines, so every operation is a pair of DST-I
// transforms.
class BoxSpectral {
public:
    BoxSpectral(int width, int height);
    explicit BoxSpectral(int side) : BoxSpectral(side, side) {}

    int width() const { return nx_; }
    int height() const { return ny_; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(nx_) * ny_; }

    // Eigenvalue of I - P for mode (j,k), 1-based.
    double eigenvalue(int j, int k) const;

    // G f.
    Eigen::VectorXd apply_green(const Eigen::VectorXd& f) const;
    // Exact DGFF sample.
    Eigen::VectorXd sample(Rng& rng) const;
    Eigen::VectorXd green_column(Eigen::Index i) const;
    double green(int x1, int y1, int x2, int y2) const;
    // All diagonal entries G(x,x).
    Eigen::VectorXd diagonal() const;

private:
    void dst2(const double* in, double* out) const;

    int nx_, ny_;
    void* plan_;
    Eigen::VectorXd inv_lambda_;
};

} // namespace dgff
