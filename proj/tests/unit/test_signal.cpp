#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rispart/error.hpp"
#include "rispart/signal.hpp"

using namespace rispart;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex J{0.0, 1.0};

std::vector<Complex> random_channel(RandomStream& s, int n) {
    std::vector<Complex> c(static_cast<std::size_t>(n));
    for (auto& x : c) x = s.complex_normal(1.0);
    return c;
}

}  // namespace

TEST(Cophase, Examples) {
    const std::vector<Complex> v{{2.0, 0.0}, {1.0, 0.0}};
    const std::vector<Complex> g{{0.5, 0.0}, J};
    const std::vector<int> bf{0, 1};
    const auto theta = bf_cophase(v, g, bf);
    EXPECT_EQ(theta[0], 0.0);
    EXPECT_NEAR(theta[1], 3.0 * kPi / 2.0, 1e-15);
}

TEST(Cophase, TermsBecomeRealAndNonNegative) {
    RandomStream s(1);
    const auto v = random_channel(s, 50);
    const auto g = random_channel(s, 50);
    std::vector<int> bf(50);
    for (int i = 0; i < 50; ++i) bf[static_cast<std::size_t>(i)] = i;
    const auto theta = bf_cophase(v, g, bf);
    for (std::size_t k = 0; k < theta.size(); ++k) {
        EXPECT_GE(theta[k], 0.0);
        EXPECT_LT(theta[k], 2.0 * kPi);
        const Complex t = v[k] * std::polar(1.0, theta[k]) * g[k];
        EXPECT_NEAR(t.imag(), 0.0, 1e-12);
        EXPECT_GT(t.real(), 0.0);
    }
}

TEST(Cophase, BeatsRandomAlternatives) {
    for (std::uint64_t inst = 0; inst < 50; ++inst) {
        RandomStream s(2, 0, inst, StreamPurpose::channel);
        const int n = 16;
        const auto v = random_channel(s, n);
        const auto g = random_channel(s, n);
        const auto h = random_channel(s, n);
        const Partition p{{}, [] {
                              std::vector<int> a(16);
                              for (int i = 0; i < 16; ++i) a[static_cast<std::size_t>(i)] = i;
                              return a;
                          }(),
                          n};
        const auto best = std::abs(aggregate_terms_ue1(v, g, h, p, {bf_cophase(v, g, p.bf_set), {}}).a);
        for (int alt = 0; alt < 100; ++alt) {
            std::vector<double> theta(static_cast<std::size_t>(n));
            for (auto& t : theta) t = s.uniform() * 2.0 * kPi;
            const auto other = std::abs(aggregate_terms_ue1(v, g, h, p, {theta, {}}).a);
            EXPECT_GE(best + 1e-12, other);
        }
    }
}

TEST(Psrp, Rows) {
    for (double phi : psrp_row(PsrpPattern::zeros(2, 5), 1)) EXPECT_EQ(phi, 0.0);
    const auto alt = psrp_row(PsrpPattern::alternating(2, 6), 0);
    for (std::size_t i = 0; i < alt.size(); ++i) EXPECT_EQ(alt[i], i % 2 ? kPi : 0.0);
    const auto sig = PsrpPattern::balanced_signature(7, 16);
    EXPECT_EQ(sig, PsrpPattern::balanced_signature(7, 16));
    EXPECT_EQ(std::count(sig.begin(), sig.end(), 1), 8);
    const auto pattern = PsrpPattern::from_signature(sig, 4);
    EXPECT_EQ(psrp_row(pattern, 3), psrp_row(pattern, 3));
    for (int m = 0; m < 16; ++m) {
        for (double phi : psrp_row(pattern, m)) EXPECT_EQ(phi, sig[static_cast<std::size_t>(m)] > 0 ? 0.0 : kPi);
    }
    EXPECT_THROW(psrp_row(pattern, 16), InvalidArgument);
    EXPECT_THROW((PsrpPattern{1, 2, {0, 2}}), InvalidArgument);
}

TEST(PhaseConfig, DomainChecked) {
    EXPECT_NO_THROW((PhaseConfig{{0.0, 6.28}, {0.0, kPi}}.validate()));
    EXPECT_THROW((PhaseConfig{{2.0 * kPi}, {}}.validate()), InvalidArgument);
    EXPECT_THROW((PhaseConfig{{-0.1}, {}}.validate()), InvalidArgument);
    EXPECT_THROW((PhaseConfig{{}, {1.0}}.validate()), InvalidArgument);
}

TEST(Identification, Examples) {
    EXPECT_EQ(received_identification(std::vector<Complex>{0.0}, std::vector<double>{0.0}, 0.0), Complex(0.0));
    EXPECT_EQ(received_identification(std::vector<Complex>{1.0}, std::vector<double>{kPi}, 0.0), Complex(-1.0));
    const std::vector<Complex> f{{1.0, 2.0}, {0.5, -1.0}};
    const Complex noise{0.1, 0.2};
    EXPECT_LT(std::abs(received_identification(f, std::vector<double>{0.0, 0.0}, noise) -
                       (f[0] * f[0] + f[1] * f[1] + noise)),
              1e-15);
}

TEST(AggregateTerms, ZeroChannels) {
    const std::vector<Complex> z(4);
    const Partition p{{1, 3}, {0, 2}, 4};
    const auto t = aggregate_terms_ue1(z, z, z, p, {{0.0, 0.0}, {0.0, kPi}});
    EXPECT_EQ(t.a, Complex(0.0));
    EXPECT_EQ(t.b, Complex(0.0));
}

TEST(AggregateTerms, TwoElementHandExpansion) {
    // element 0 in BF (theta = pi/2), element 1 in ID (phi = pi)
    const std::vector<Complex> v{{1.0, 0.0}, {0.0, 1.0}};
    const std::vector<Complex> g{{0.0, 1.0}, {1.0, 0.0}};
    const std::vector<Complex> h{{1.0, 0.0}, {1.0, 1.0}};
    const Partition p{{1}, {0}, 2};
    const auto t = aggregate_terms_ue1(v, g, h, p, {{kPi / 2.0}, {kPi}});
    const Complex v_bf = 1.0 * J * J;            // v0 e^{j pi/2} g0 = -1
    const Complex h_bf = 1.0 * J * J;            // h0 e^{j pi/2} g0 = -1
    const Complex v_id = J * -1.0 * 1.0;         // v1 (-1) g1 = -j
    const Complex h_id = Complex(1, 1) * -1.0;   // h1 (-1) g1
    EXPECT_LT(std::abs(t.v_bf - v_bf), 1e-15);
    EXPECT_LT(std::abs(t.h_bf - h_bf), 1e-15);
    EXPECT_LT(std::abs(t.v_id - v_id), 1e-15);
    EXPECT_LT(std::abs(t.h_id - h_id), 1e-15);
    EXPECT_EQ(t.a, t.v_bf);
    EXPECT_LT(std::abs(t.b - (v_id + h_bf + h_id)), 1e-15);
    const auto quiet = t.without_probe();
    EXPECT_EQ(quiet.b, t.v_id);
}

TEST(AggregateTerms, RejectsMismatchedPhases) {
    const std::vector<Complex> c(2, 1.0);
    const Partition p{{1}, {0}, 2};
    EXPECT_THROW(aggregate_terms_ue1(c, c, c, p, {{}, {0.0}}), InvalidArgument);
}

TEST(Ue2, NoInterferenceWhenQIsZero) {
    RandomStream s(4);
    const auto h = random_channel(s, 6);
    const auto v = random_channel(s, 6);
    const Partition p{{0, 2, 4}, {1, 3, 5}, 6};
    const PhaseConfig ph{{0.3, 1.2, 4.0}, {0.0, kPi, kPi}};
    const auto r = received_ue2(1.0, 0.0, h, v, p, ph, 0.0);
    Complex expect = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        expect += h[static_cast<std::size_t>(p.id_set[k])] * h[static_cast<std::size_t>(p.id_set[k])] *
                  std::polar(1.0, ph.phi[k]);
        expect += h[static_cast<std::size_t>(p.bf_set[k])] * h[static_cast<std::size_t>(p.bf_set[k])] *
                  std::polar(1.0, ph.theta[k]);
    }
    EXPECT_LT(std::abs(r.total - expect), 1e-12);
}

TEST(Ue2, ZeroChannelsLeaveNoise) {
    const std::vector<Complex> z(2);
    const Partition p{{1}, {0}, 2};
    const auto r = received_ue2(1.0, Complex(0.7, 0.7), z, z, p, {{1.0}, {0.0}}, Complex(0.1, -0.3));
    EXPECT_EQ(r.total, Complex(0.1, -0.3));
}

TEST(Ue2, TwoElementHandCase) {
    const std::vector<Complex> h{{1.0, 0.0}, {0.0, 2.0}};
    const std::vector<Complex> v{{0.0, 1.0}, {1.0, 1.0}};
    const Partition p{{1}, {0}, 2};
    const Complex x = 1.0, q = Complex(0.0, 1.0), n = Complex(0.01, 0.0);
    const auto r = received_ue2(x, q, h, v, p, {{kPi / 2.0}, {kPi}}, n);
    const Complex id_sig = -(h[1] * h[1]);          // x h1^2 e^{j pi}
    const Complex bf_sig = h[0] * h[0] * J;         // x h0^2 e^{j pi/2}
    const Complex id_int = q * -(v[1] * h[1]);
    const Complex bf_int = q * (v[0] * J * h[0]);
    EXPECT_LT(std::abs(r.total - (id_sig + bf_sig + id_int + bf_int + n)), 1e-14);
    EXPECT_LT(std::abs(r.bf_interference - bf_int), 1e-15);
}

TEST(Ue2, DecompositionCloses) {
    for (std::uint64_t t = 0; t < 200; ++t) {
        RandomStream s(6, 0, t, StreamPurpose::channel);
        const int n = 32;
        const auto h = random_channel(s, n);
        const auto v = random_channel(s, n);
        const auto part = partition_random(n, 16, s);
        const PhaseConfig ph{bf_cophase(v, h, part.bf_set), psrp_row(PsrpPattern::alternating(1, 16), 0)};
        const auto r = received_ue2(1.0, qpsk_symbol(s), h, v, part, ph, s.complex_normal(0.1));
        const Complex sum = r.id_signal + r.bf_signal + r.id_interference + r.bf_interference + r.noise;
        const double scale = std::max({std::abs(r.id_signal), std::abs(r.bf_signal),
                                       std::abs(r.id_interference), std::abs(r.bf_interference)});
        EXPECT_LT(std::abs(r.total - sum), 1e-12 * scale);
    }
}

TEST(Sinr, Examples) {
    AggregateTerms t{};
    t.a = 1.0;
    t.b = 0.0;
    EXPECT_DOUBLE_EQ(sinr_ue1(t, 1.0, 1.0), 1.0);
    t.a = 0.0;
    EXPECT_EQ(sinr_ue1(t, 1.0, 1.0), 0.0);
    t.a = 2.0;
    t.b = 1.0;
    EXPECT_NEAR(sinr_ue1(t, 1e-16, 1e-3), 4.0 / (1.0 + 1e-13), 1e-15);
    EXPECT_THROW(sinr_ue1(t, 0.0, 1.0), InvalidArgument);
    EXPECT_THROW(sinr_ue1(t, 1.0, -1.0), InvalidArgument);
}

TEST(Sinr, NonDecreasingInTransmitPower) {
    RandomStream s(8);
    for (int k = 0; k < 100; ++k) {
        AggregateTerms t{};
        t.a = s.complex_normal(1.0);
        t.b = s.complex_normal(1.0);
        double last = 0.0;
        for (double pt_dbm = -20.0; pt_dbm <= 50.0; pt_dbm += 5.0) {
            const double v = sinr_ue1(t, 1e-16, std::pow(10.0, pt_dbm / 10.0) * 1e-3);
            EXPECT_GE(v, last);
            last = v;
        }
    }
}

TEST(Qpsk, UnitPowerConstellation) {
    RandomStream s(9);
    for (int i = 0; i < 100; ++i) {
        const Complex q = qpsk_symbol(s);
        EXPECT_NEAR(std::norm(q), 1.0, 1e-15);
        EXPECT_NEAR(std::abs(q.real()), std::sqrt(0.5), 1e-15);
    }
}
