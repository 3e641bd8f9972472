#include <cmath>
#include <numbers>
#include <random>

#include "solarev/coherence.hpp"
#include "support.hpp"

using namespace solarev;
using std::numbers::pi;

namespace {

constexpr Eigen::Index kN = 2048;

CoherenceOptions short_options() {
  CoherenceOptions o;
  o.max_period = 512.0;
  return o;
}

Eigen::VectorXd sinusoid(double period, double lag = 0.0, Eigen::Index n = kN) {
  Eigen::VectorXd x(n);
  for (Eigen::Index t = 0; t < n; ++t) x[t] = std::sin(2.0 * pi * (static_cast<double>(t) - lag) / period);
  return x;
}

Eigen::VectorXd white_noise(std::uint64_t seed, Eigen::Index n = kN) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

Eigen::Index nearest_scale(const CoherenceMap& m, double period) {
  Eigen::Index j = 0;
  (m.periods.array().log() - std::log(period)).abs().minCoeff(&j);
  return j;
}

double wrap(double a) { return std::remainder(a, 2.0 * pi); }

}  // namespace

TEST_SUITE("coherence") {
  TEST_CASE("scales and cone of influence") {
    const WaveletScales s = dyadic_scales();
    CHECK(s.periods.size() == 89);
    CHECK(s.periods[0] == doctest::Approx(2.0));
    CHECK(s.periods[88] == doctest::Approx(4096.0));
    CHECK((s.periods.array() / s.scales.array() - morlet_fourier_factor()).abs().maxCoeff() < 1e-12);
    CHECK(morlet_fourier_factor() == doctest::Approx(1.0330).epsilon(1e-3));
    CHECK(next_pow2(2048) == 2048);
    CHECK(next_pow2(2049) == 4096);
    CHECK(next_pow2(8760) == 16384);

    const Eigen::VectorXd coi = cone_of_influence(101);
    CHECK(coi[50] == doctest::Approx(morlet_fourier_factor() / std::sqrt(2.0) * 50.0));
    CHECK(coi[10] == coi[90]);
    CHECK(coi[0] < 1e-3);
  }

  TEST_CASE("cwt of a sinusoid peaks at its period") {
    const WaveletScales s = dyadic_scales(2.0, 512.0);
    const Eigen::MatrixXcd w = cwt_morlet(sinusoid(24.0), s.scales);
    Eigen::Index j = 0;
    w.col(kN / 2).cwiseAbs().maxCoeff(&j);
    Eigen::Index nearest = 0;
    (s.periods.array().log() - std::log(24.0)).abs().minCoeff(&nearest);
    CHECK(j == nearest);

    CHECK(cwt_morlet(Eigen::VectorXd::Zero(kN), s.scales).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(cwt_morlet(sinusoid(24.0), s.scales, 1.0, 100), ValidationError);
  }

  TEST_CASE("self coherence") {
    const Eigen::VectorXd x = sinusoid(24.0) + 0.5 * white_noise(3);
    const CoherenceMap m = wavelet_coherence(x, x, short_options());
    double worst = 1.0;
    for (Eigen::Index j = 0; j < m.coherence.rows(); ++j)
      for (Eigen::Index t = 0; t < m.times(); ++t)
        if (m.inside_coi(j, t)) worst = std::min(worst, m.coherence(j, t));
    CHECK(worst >= 0.99);
    CHECK(m.coherence.maxCoeff() <= 1.0);
    CHECK(m.phase.cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("quarter-period lag") {
    const CoherenceMap m = wavelet_coherence(sinusoid(24.0), sinusoid(24.0, 6.0), short_options());
    const Eigen::Index j = nearest_scale(m, 24.0);
    for (Eigen::Index t = kN / 4; t < 3 * kN / 4; t += 64) {
      CHECK(m.coherence(j, t) > 0.99);
      CHECK(std::abs(m.phase(j, t) - pi / 2.0) < 0.2);
    }
  }

  TEST_CASE("symmetry and affine invariance") {
    const Eigen::VectorXd x = white_noise(5) + sinusoid(24.0);
    const Eigen::VectorXd y = white_noise(6) + sinusoid(24.0, 3.0);
    const CoherenceMap xy = wavelet_coherence(x, y, short_options());
    const CoherenceMap yx = wavelet_coherence(y, x, short_options());
    CHECK((xy.coherence - yx.coherence).cwiseAbs().maxCoeff() < 1e-10);
    double phase_err = 0.0;
    for (Eigen::Index i = 0; i < xy.phase.size(); ++i)
      phase_err = std::max(phase_err, std::abs(wrap(xy.phase.data()[i] + yx.phase.data()[i])));
    CHECK(phase_err < 1e-8);

    const Eigen::VectorXd y2 = (3.5 * y.array() + 40.0).matrix();
    const CoherenceMap affine = wavelet_coherence(x, y2, short_options());
    CHECK((xy.coherence - affine.coherence).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("padding beyond the minimum leaves the COI interior alone") {
    const Eigen::VectorXd x = white_noise(8, 2000) + sinusoid(24.0, 0.0, 2000);
    const Eigen::VectorXd y = white_noise(9, 2000) + sinusoid(24.0, 2.0, 2000);
    CHECK(default_padding(2000) == 4000);
    CHECK(default_padding(8760) == 17640);
    CHECK(next_fast_size(4097) == 4116);
    CoherenceOptions a = short_options();
    CoherenceOptions b = a;
    b.pad_to = 16384;
    const CoherenceMap ma = wavelet_coherence(x, y, a);
    const CoherenceMap mb = wavelet_coherence(x, y, b);
    // Below about 3 h the Morlet spectrum is cut by the Nyquist limit and the
    // discrete kernel rings; those scales are left out.
    double worst = 0.0;
    for (Eigen::Index j = 0; j < ma.coherence.rows(); ++j)
      for (Eigen::Index t = 0; t < ma.times(); ++t)
        if (ma.periods[j] >= 3.0 && ma.inside_coi(j, t))
          worst = std::max(worst, std::abs(ma.coherence(j, t) - mb.coherence(j, t)));
    MESSAGE("max in-COI padding difference ", worst);
    CHECK(worst < 1e-3);
  }

  TEST_CASE("independent noise is weakly coherent") {
    double total = 0.0;
    long count = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      const CoherenceMap m = wavelet_coherence(white_noise(1000 + 2 * k), white_noise(1001 + 2 * k), short_options());
      const Eigen::Index lo = nearest_scale(m, 32.0), hi = nearest_scale(m, 128.0);
      for (Eigen::Index j = lo; j <= hi; ++j)
        for (Eigen::Index t = 0; t < m.times(); ++t)
          if (m.inside_coi(j, t)) {
            total += m.coherence(j, t);
            ++count;
          }
    }
    MESSAGE("mean white-noise coherence at 32-128 h: ", total / static_cast<double>(count));
    CHECK(total / static_cast<double>(count) < 0.5);
  }

  TEST_CASE("ar1 estimate") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> d(0.0, 1.0);
    Eigen::VectorXd x(20000);
    x[0] = 0.0;
    for (Eigen::Index i = 1; i < x.size(); ++i) x[i] = 0.7 * x[i - 1] + d(rng);
    CHECK(ar1_coefficient(x) == doctest::Approx(0.7).epsilon(0.03));
    CHECK(std::abs(ar1_coefficient(white_noise(2))) < 0.1);
  }

  TEST_CASE("significance mask") {
    SignificanceOptions sig;
    sig.n_surrogates = 100;
    const Eigen::VectorXd x = white_noise(21) + sinusoid(24.0);

    CoherenceMap same = wavelet_coherence(x, x, short_options());
    const auto mask = significance_mask(same, x, x, short_options(), sig);
    bool all = true;
    for (Eigen::Index j = 0; j < mask.rows(); ++j)
      for (Eigen::Index t = 0; t < mask.cols(); ++t)
        if (same.inside_coi(j, t)) all = all && mask(j, t);
    CHECK(all);

    const Eigen::VectorXd a = white_noise(31), b = white_noise(32);
    CoherenceMap m1 = wavelet_coherence(a, b, short_options());
    CoherenceMap m2 = wavelet_coherence(a, b, short_options());
    significance_mask(m1, a, b, short_options(), sig);
    sig.threads = 3;
    significance_mask(m2, a, b, short_options(), sig);
    CHECK((m1.mask == m2.mask).all());
    CHECK(m1.thresholds == m2.thresholds);
  }

  TEST_CASE("false positive rate on independent noise") {
    SignificanceOptions sig;
    sig.n_surrogates = 300;
    sig.threads = 4;
    long hits = 0, area = 0;
    for (std::uint64_t k = 0; k < 4; ++k) {
      const Eigen::VectorXd a = white_noise(500 + 2 * k), b = white_noise(501 + 2 * k);
      CoherenceMap m = wavelet_coherence(a, b, short_options());
      significance_mask(m, a, b, short_options(), sig);
      for (Eigen::Index j = 0; j < m.coherence.rows(); ++j)
        for (Eigen::Index t = 0; t < m.times(); ++t)
          if (m.inside_coi(j, t)) {
            hits += m.mask(j, t);
            ++area;
          }
    }
    const double rate = static_cast<double>(hits) / static_cast<double>(area);
    MESSAGE("false positive rate ", rate);
    CHECK(rate <= sig.alpha + 0.02);
  }

  TEST_CASE("input validation") {
    const Eigen::VectorXd x = white_noise(1);
    CHECK_THROWS_AS(wavelet_coherence(x, Eigen::VectorXd::Constant(kN, 2.0)), ValidationError);
    CHECK_THROWS_AS(wavelet_coherence(x, white_noise(2, kN - 1)), ValidationError);
    CHECK_THROWS_AS(wavelet_coherence(white_noise(1, 8), white_noise(2, 8)), ValidationError);
    Eigen::VectorXd bad = x;
    bad[7] = std::nan("");
    CHECK_THROWS_WITH_AS(wavelet_coherence(bad, x), doctest::Contains("index 7"), ValidationError);
    CoherenceMap m = wavelet_coherence(x, white_noise(2), short_options());
    SignificanceOptions few;
    few.n_surrogates = 10;
    CHECK_THROWS_AS(significance_mask(m, x, white_noise(2), short_options(), few), ValidationError);
    SignificanceOptions wide;
    wide.alpha = 1.5;
    CHECK_THROWS_AS(significance_mask(m, x, white_noise(2), short_options(), wide), ValidationError);
  }
}
