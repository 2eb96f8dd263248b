#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rispart/rng.hpp"

namespace rispart {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kSpeedOfLight = 299792458.0;

/// Planar RIS: rows x cols elements on a square grid. `spacing` is the
/// element pitch in wavelengths.
struct RisGeometry {
    int rows = 8;
    int cols = 8;
    double spacing = 0.5;
    double carrier_hz = 1.8e9;

    int count() const noexcept { return rows * cols; }
    double wavelength() const noexcept { return kSpeedOfLight / carrier_hz; }
    void validate() const;

    /// Most nearly square rows x cols factorisation of n (rows <= cols).
    static RisGeometry near_square(int n, double spacing, double carrier_hz);
};

struct Position {
    double x = 0.0;
    double y = 0.0;
};

/// Element centres in metres, row-major, first element at the origin.
/// Element (r, c) sits at (c * pitch, r * pitch).
std::vector<Position> element_positions(const RisGeometry& geometry);

/// Real spatial correlation matrix with entries sinc(2 d / lambda),
/// sinc(x) = sin(pi x) / (pi x). Construction eigen-decomposes the matrix
/// once: eigenvalues in [-1e-10, 0) are clipped to zero, anything below
/// raises NumericalError. The symmetric square root is kept for sampling.
class CorrelationMatrix {
public:
    static constexpr double kEigenTolerance = 1e-10;

    explicit CorrelationMatrix(Eigen::MatrixXd entries);
    static CorrelationMatrix identity(int n);

    int dimension() const noexcept { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    double operator()(int i, int j) const { return entries_(i, j); }

    /// Smallest eigenvalue before clipping.
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }
    bool is_identity() const noexcept { return identity_; }

    /// S with S * S = R, S symmetric PSD.
    const Eigen::MatrixXd& sqrt_factor() const noexcept { return sqrt_factor_; }

private:
    Eigen::MatrixXd entries_;
    Eigen::MatrixXd sqrt_factor_;
    double min_eigenvalue_ = 1.0;
    bool identity_ = false;
};

double normalized_sinc(double x) noexcept;

CorrelationMatrix correlation_matrix(std::span<const Position> positions, double wavelength);

/// Draws z = sqrt(variance) * S * w with w ~ CN(0, I).
ComplexVector sample_correlated(const CorrelationMatrix& r, double variance,
                                RandomStream& stream);

/// Log-distance model: (c / (4 pi f_c))^2 * d^-exponent.
double path_gain(double distance_m, double exponent, double carrier_hz);

double dbm_to_watts(double dbm) noexcept;
double watts_to_dbm(double watts) noexcept;

struct LinkDistances {
    double tx_ris = 200.0;   // g
    double ris_ue1 = 100.0;  // v
    double ris_ue2 = 100.0;  // h
    double exponent = 2.2;
};

/// Large-scale parameters. Path gains are per-element complex variances;
/// transmit power is supplied per sweep point and enters only via sigma^2 / P_t.
struct LinkBudget {
    double noise_dbm = -130.0;
    LinkDistances distances;
    double beta_v = 0.0;
    double beta_g = 0.0;
    double beta_h = 0.0;

    double noise_watts() const noexcept { return dbm_to_watts(noise_dbm); }
    void validate() const;

    static LinkBudget from_distances(const LinkDistances& d, double carrier_hz,
                                     double noise_dbm = -130.0);
    /// Unit path gains (normalised i.i.d. analysis).
    static LinkBudget unit(double noise_dbm = -130.0);
};

/// One block-fading draw.
/// v: RIS - UE1 (beamforming user), g: Tx - RIS, h: RIS <-> UE2 (reciprocal).
struct ChannelRealization {
    ComplexVector v;
    ComplexVector g;
    ComplexVector h;

    int size() const noexcept { return static_cast<int>(v.size()); }
};

/// Correlated Rayleigh generator for all three links. Immutable after
/// construction and shareable between workers.
class ChannelModel {
public:
    ChannelModel(CorrelationMatrix correlation, LinkBudget budget);
    ChannelModel(const RisGeometry& geometry, LinkBudget budget);

    /// Draw order: v, g, h.
    ChannelRealization draw(RandomStream& stream) const;

    int size() const noexcept { return correlation_.dimension(); }
    const CorrelationMatrix& correlation() const noexcept { return correlation_; }
    const LinkBudget& budget() const noexcept { return budget_; }

private:
    CorrelationMatrix correlation_;
    LinkBudget budget_;
};

}  // namespace rispart
