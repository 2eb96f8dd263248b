#include "rispart/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rispart/error.hpp"

namespace rispart {

void RisGeometry::validate() const {
    if (rows < 1 || cols < 1) {
        throw InvalidArgument("RIS geometry needs rows >= 1 and cols >= 1");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw InvalidArgument("RIS element spacing must be positive");
    }
    if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz)) {
        throw InvalidArgument("carrier frequency must be positive");
    }
}

RisGeometry RisGeometry::near_square(int n, double spacing, double carrier_hz) {
    if (n < 1) throw InvalidArgument("element count must be positive");
    int rows = static_cast<int>(std::sqrt(static_cast<double>(n)));
    while (rows > 1 && n % rows != 0) --rows;
    RisGeometry g{rows, n / rows, spacing, carrier_hz};
    g.validate();
    return g;
}

std::vector<Position> element_positions(const RisGeometry& geometry) {
    geometry.validate();
    const double pitch = geometry.spacing * geometry.wavelength();
    std::vector<Position> out;
    out.reserve(static_cast<std::size_t>(geometry.count()));
    for (int r = 0; r < geometry.rows; ++r) {
        for (int c = 0; c < geometry.cols; ++c) {
            out.push_back({c * pitch, r * pitch});
        }
    }
    return out;
}

double normalized_sinc(double x) noexcept {
    if (std::abs(x) < 1e-8) return 1.0 - std::pow(std::numbers::pi * x, 2) / 6.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    const Eigen::Index n = entries_.rows();
    if (n == 0 || entries_.cols() != n) {
        throw InvalidArgument("correlation matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(entries_(i, i) - 1.0) > 1e-12) {
            throw InvalidArgument("correlation matrix diagonal must be 1");
        }
        for (Eigen::Index j = 0; j < i; ++j) {
            const double a = entries_(i, j);
            if (a != entries_(j, i) || std::abs(a) > 1.0 + 1e-12 || !std::isfinite(a)) {
                throw InvalidArgument("correlation matrix must be symmetric with entries in [-1, 1]");
            }
        }
    }

    identity_ = entries_.isIdentity(0.0);
    if (identity_) {
        sqrt_factor_ = entries_;
        min_eigenvalue_ = 1.0;
        return;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries_);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigen-decomposition of correlation matrix failed");
    }
    Eigen::VectorXd lambda = solver.eigenvalues();
    min_eigenvalue_ = lambda.minCoeff();
    if (min_eigenvalue_ < -kEigenTolerance) {
        std::ostringstream msg;
        msg << "correlation matrix is not positive semidefinite (min eigenvalue "
            << min_eigenvalue_ << ")";
        throw NumericalError(msg.str());
    }
    lambda = lambda.cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXd& q = solver.eigenvectors();
    sqrt_factor_ = q * lambda.asDiagonal() * q.transpose();
    // exact symmetry so S^T w == S w bit for bit
    sqrt_factor_ = 0.5 * (sqrt_factor_ + sqrt_factor_.transpose()).eval();
}

CorrelationMatrix CorrelationMatrix::identity(int n) {
    if (n < 1) throw InvalidArgument("dimension must be positive");
    return CorrelationMatrix(Eigen::MatrixXd::Identity(n, n));
}

CorrelationMatrix correlation_matrix(std::span<const Position> positions, double wavelength) {
    if (positions.empty()) throw InvalidArgument("no element positions");
    if (!(wavelength > 0.0)) throw InvalidArgument("wavelength must be positive");
    const auto n = static_cast<Eigen::Index>(positions.size());
    Eigen::MatrixXd r(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        r(i, i) = 1.0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double dx = positions[i].x - positions[j].x;
            const double dy = positions[i].y - positions[j].y;
            const double value = normalized_sinc(2.0 * std::hypot(dx, dy) / wavelength);
            r(i, j) = value;
            r(j, i) = value;
        }
    }
    return CorrelationMatrix(std::move(r));
}

namespace {

// w: n x (2 * links) real matrix of N(0, 1/2) draws, column pairs (re, im).
Eigen::MatrixXd draw_white(Eigen::Index n, Eigen::Index links, RandomStream& stream) {
    Eigen::MatrixXd w(n, 2 * links);
    const double s = std::sqrt(0.5);
    for (Eigen::Index col = 0; col < w.cols(); col += 2) {
        for (Eigen::Index i = 0; i < n; ++i) {
            w(i, col) = s * stream.normal();
            w(i, col + 1) = s * stream.normal();
        }
    }
    return w;
}

ComplexVector to_complex(const Eigen::MatrixXd& z, Eigen::Index link, double scale) {
    ComplexVector out(static_cast<std::size_t>(z.rows()));
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = {scale * z(i, 2 * link), scale * z(i, 2 * link + 1)};
    }
    return out;
}

}  // namespace

ComplexVector sample_correlated(const CorrelationMatrix& r, double variance,
                                RandomStream& stream) {
    if (!(variance >= 0.0)) throw InvalidArgument("variance must be non-negative");
    Eigen::MatrixXd w = draw_white(r.dimension(), 1, stream);
    if (!r.is_identity()) w = r.sqrt_factor() * w;
    return to_complex(w, 0, std::sqrt(variance));
}

double path_gain(double distance_m, double exponent, double carrier_hz) {
    if (!(distance_m > 0.0)) throw InvalidArgument("distance must be positive");
    if (!(exponent >= 2.0)) throw InvalidArgument("path-loss exponent must be >= 2");
    if (!(carrier_hz > 0.0)) throw InvalidArgument("carrier frequency must be positive");
    const double free_space = kSpeedOfLight / (4.0 * std::numbers::pi * carrier_hz);
    return free_space * free_space * std::pow(distance_m, -exponent);
}

double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) noexcept { return 10.0 * std::log10(watts) + 30.0; }

void LinkBudget::validate() const {
    for (double beta : {beta_v, beta_g, beta_h}) {
        if (!(beta > 0.0) || beta > 1.0) throw InvalidArgument("path gains must lie in (0, 1]");
    }
    if (std::isnan(noise_dbm) || noise_dbm == HUGE_VAL) throw InvalidArgument("noise power must be below +inf dBm");
}

LinkBudget LinkBudget::from_distances(const LinkDistances& d, double carrier_hz, double noise_dbm) {
    LinkBudget b;
    b.noise_dbm = noise_dbm;
    b.distances = d;
    b.beta_v = path_gain(d.ris_ue1, d.exponent, carrier_hz);
    b.beta_g = path_gain(d.tx_ris, d.exponent, carrier_hz);
    b.beta_h = path_gain(d.ris_ue2, d.exponent, carrier_hz);
    b.validate();
    return b;
}

LinkBudget LinkBudget::unit(double noise_dbm) {
    LinkBudget b;
    b.noise_dbm = noise_dbm;
    b.beta_v = b.beta_g = b.beta_h = 1.0;
    return b;
}

ChannelModel::ChannelModel(CorrelationMatrix correlation, LinkBudget budget)
    : correlation_(std::move(correlation)), budget_(budget) {
    budget_.validate();
}

ChannelModel::ChannelModel(const RisGeometry& geometry, LinkBudget budget)
    : ChannelModel(correlation_matrix(element_positions(geometry), geometry.wavelength()),
                   budget) {}

ChannelRealization ChannelModel::draw(RandomStream& stream) const {
    Eigen::MatrixXd w = draw_white(correlation_.dimension(), 3, stream);
    if (!correlation_.is_identity()) w = correlation_.sqrt_factor() * w;
    return {to_complex(w, 0, std::sqrt(budget_.beta_v)),
            to_complex(w, 1, std::sqrt(budget_.beta_g)),
            to_complex(w, 2, std::sqrt(budget_.beta_h))};
}

}  // namespace rispart
