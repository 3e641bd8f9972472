#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "solarev/core.hpp"

namespace solarev {

inline constexpr double kMorletOmega0 = 6.0;

/// Fourier period of a Morlet scale: period = kMorletFourierFactor * scale.
double morlet_fourier_factor(double omega0 = kMorletOmega0);

struct WaveletScales {
  Eigen::VectorXd scales;   // same time unit as dt
  Eigen::VectorXd periods;
  double dj = 1.0 / 8.0;    // scale spacing in octaves
  double dt = 1.0;
};

/// Log-spaced scales whose Fourier periods run from min_period to at least
/// max_period with `suboctaves` steps per octave.
WaveletScales dyadic_scales(double min_period = 2.0, double max_period = 4096.0, int suboctaves = 8,
                            double dt = 1.0);

/// Smallest power of two >= n.
Eigen::Index next_pow2(Eigen::Index n);

/// Smallest length >= n whose only prime factors are 2, 3, 5 and 7; FFTW
/// handles these as fast as powers of two.
Eigen::Index next_fast_size(Eigen::Index n);

/// FFT length used when none is given: next_fast_size(2n). At least n zeros
/// follow the series, so the circular transform never wraps the far end of
/// the record back into the cone of influence.
inline Eigen::Index default_padding(Eigen::Index n) { return next_fast_size(2 * n); }

/// Continuous wavelet transform with the Morlet mother wavelet (omega0 = 6),
/// one frequency-domain product per scale. Rows are scales, columns time.
/// The input is used as given; see standardize(). pad_to = 0 picks
/// default_padding().
Eigen::MatrixXcd cwt_morlet(const Eigen::VectorXd& series, const Eigen::VectorXd& scales, double dt = 1.0,
                            Eigen::Index pad_to = 0);

/// Zero mean, unit variance (a constant series becomes all zeros).
Eigen::VectorXd standardize(const Eigen::VectorXd& x);

/// Removes the least-squares straight line.
Eigen::VectorXd detrend(const Eigen::VectorXd& x);

/// Cone of influence: largest period (time units) unaffected by the series
/// edges at each time step.
Eigen::VectorXd cone_of_influence(Eigen::Index n, double dt = 1.0);

struct CoherenceOptions {
  double min_period = 2.0;
  double max_period = 4096.0;
  int suboctaves = 8;
  double dt = 1.0;
  Eigen::Index pad_to = 0;
  bool detrend = false;
};

struct CoherenceMap {
  Eigen::VectorXd periods;
  Eigen::VectorXd scales;
  Eigen::MatrixXd coherence;  // squared wavelet coherence, scales x time
  Eigen::MatrixXd phase;      // radians, arg of the smoothed cross spectrum
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;  // empty until significance is run
  Eigen::VectorXd coi;
  Eigen::VectorXd thresholds;  // per scale, empty until significance is run

  bool inside_coi(Eigen::Index scale, Eigen::Index t) const { return periods[scale] <= coi[t]; }
  Eigen::Index times() const { return coherence.cols(); }
};

CoherenceMap wavelet_coherence(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                               const CoherenceOptions& options = {});

inline CoherenceMap wavelet_coherence(const HourlySeries& x, const HourlySeries& y,
                                      const CoherenceOptions& options = {}) {
  return wavelet_coherence(x.values, y.values, options);
}

/// Lag-1 autocorrelation estimate used to fit the red-noise surrogates.
double ar1_coefficient(const Eigen::VectorXd& x);

struct SignificanceOptions {
  int n_surrogates = 300;
  double alpha = 0.05;
  std::uint64_t seed = 42;
  int threads = 1;
};

/// Per-scale coherence levels exceeded by a fraction alpha of AR(1)
/// surrogate pairs (fitted to x and y) inside the cone of influence.
Eigen::VectorXd coherence_thresholds(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                     const CoherenceOptions& options, const SignificanceOptions& sig);

/// Fills map.thresholds and map.mask (coherence > threshold) and returns the mask.
Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> significance_mask(CoherenceMap& map, const Eigen::VectorXd& x,
                                                                     const Eigen::VectorXd& y,
                                                                     const CoherenceOptions& options,
                                                                     const SignificanceOptions& sig);

}  // namespace solarev
