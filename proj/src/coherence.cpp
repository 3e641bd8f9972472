#include "solarev/coherence.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <utility>
#include <vector>

#if defined(EIGEN_FFTW_DEFAULT) && defined(SOLAREV_FFTW_THREADS)
#include <fftw3.h>
#endif

#include "solarev/errors.hpp"

namespace solarev {

namespace {

using cd = std::complex<double>;
using std::numbers::pi;

// Scale-by-time grids are walked one scale at a time, so rows are contiguous.
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixXcd = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// FFTW plan creation is not reentrant unless the planner is told otherwise.
void ensure_thread_safe_fft() {
#if defined(EIGEN_FFTW_DEFAULT) && defined(SOLAREV_FFTW_THREADS)
  static std::once_flag once;
  std::call_once(once, [] { fftw_make_planner_thread_safe(); });
#endif
}

// Kernel weights below exp(-70) are set to zero. Left in, they drift into
// the subnormal range, where arithmetic is slower by two orders of magnitude.
constexpr double kNegligibleExponent = -70.0;

// Scale smoothing: boxcar 0.6 octaves wide with fractional end weights.
std::vector<double> scale_kernel(double dj) {
  const double steps = 0.6 / (2.0 * dj);
  const double frac = std::fmod(steps, 1.0);
  const int ones = 2 * static_cast<int>(std::lround(steps)) - 1;
  std::vector<double> k;
  if (frac > 0.0) k.push_back(frac);
  for (int i = 0; i < ones; ++i) k.push_back(1.0);
  if (frac > 0.0) k.push_back(frac);
  const double total = ones + 2.0 * frac;
  for (double& v : k) v /= total;
  return k;
}

// Everything that depends only on the series length and the scale set;
// shared read-only between worker threads.
struct Plan {
  Eigen::Index n = 0;
  Eigen::Index npad = 0;
  double dt = 1.0;
  WaveletScales ws;
  // Both kernels carry the 1/npad of the inverse transform, which is run unscaled.
  RowMatrixXd daughter;  // scales x npad, normalised Morlet in frequency
  std::vector<std::pair<Eigen::Index, Eigen::Index>> band;  // nonzero [first, last) of each daughter row
  RowMatrixXd smoother;  // scales x npad, Gaussian time smoothing
  std::vector<double> kernel;
  Eigen::VectorXd coi;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> in_coi;
};

Eigen::VectorXd angular_frequencies(Eigen::Index npad, double dt) {
  Eigen::VectorXd w(npad);
  for (Eigen::Index k = 0; k < npad; ++k) {
    const double kk = k <= npad / 2 ? static_cast<double>(k) : static_cast<double>(k - npad);
    w[k] = 2.0 * pi * kk / (static_cast<double>(npad) * dt);
  }
  return w;
}

RowMatrixXd morlet_daughters(const Eigen::VectorXd& scales, Eigen::Index npad, double dt) {
  const Eigen::VectorXd w = angular_frequencies(npad, dt);
  const double c = std::pow(pi, -0.25);
  RowMatrixXd d(scales.size(), npad);
  for (Eigen::Index j = 0; j < scales.size(); ++j) {
    const double s = scales[j];
    const double norm = std::sqrt(2.0 * pi * s / dt) * c / static_cast<double>(npad);
    for (Eigen::Index k = 0; k < npad; ++k) {
      const double sw = s * w[k];
      const double e = -0.5 * (sw - kMorletOmega0) * (sw - kMorletOmega0);
      d(j, k) = (w[k] > 0.0 && e > kNegligibleExponent) ? norm * std::exp(e) : 0.0;
    }
  }
  return d;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> nonzero_bands(const RowMatrixXd& d) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> bands;
  for (Eigen::Index j = 0; j < d.rows(); ++j) {
    Eigen::Index first = 0, last = d.cols();
    while (first < last && d(j, first) == 0.0) ++first;
    while (last > first && d(j, last - 1) == 0.0) --last;
    bands.emplace_back(first, last);
  }
  return bands;
}

Plan make_plan(Eigen::Index n, const CoherenceOptions& o) {
  if (n < 16) throw ValidationError("coherence needs at least 16 samples, got " + std::to_string(n));
  if (o.pad_to != 0 && o.pad_to < n) throw ValidationError("pad_to must be 0 or >= the series length");
  Plan p;
  p.n = n;
  p.npad = o.pad_to == 0 ? default_padding(n) : o.pad_to;
  p.dt = o.dt;
  p.ws = dyadic_scales(o.min_period, o.max_period, o.suboctaves, o.dt);
  p.daughter = morlet_daughters(p.ws.scales, p.npad, p.dt);
  p.band = nonzero_bands(p.daughter);

  // Gaussian in time with width equal to the scale, applied in frequency
  // over a grid in sample units.
  const Eigen::VectorXd k = angular_frequencies(p.npad, 1.0);
  p.smoother.resize(p.ws.scales.size(), p.npad);
  for (Eigen::Index j = 0; j < p.ws.scales.size(); ++j) {
    const double sn = p.ws.scales[j] / p.dt;
    const double inv_npad = 1.0 / static_cast<double>(p.npad);
    p.smoother.row(j) = (-0.5 * sn * sn * k.array().square())
                            .unaryExpr([=](double e) { return e > kNegligibleExponent ? std::exp(e) * inv_npad : 0.0; })
                            .matrix()
                            .transpose();
  }
  p.kernel = scale_kernel(p.ws.dj);
  p.coi = cone_of_influence(n, p.dt);
  p.in_coi.resize(p.ws.scales.size(), n);
  for (Eigen::Index j = 0; j < p.ws.scales.size(); ++j) {
    for (Eigen::Index t = 0; t < n; ++t) p.in_coi(j, t) = p.ws.periods[j] <= p.coi[t];
  }
  return p;
}

// Per-thread FFT object and scratch buffers.
struct Workspace {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd a, b;

  explicit Workspace(Eigen::Index npad) : a(npad), b(npad) { fft.SetFlag(Eigen::FFT<double>::Unscaled); }
};

// Forward transform of the zero-padded series.
void spectrum(const Plan& p, const Eigen::VectorXd& x, Workspace& w, Eigen::VectorXcd& out) {
  w.a.setZero();
  w.a.head(p.n) = x.cast<cd>();
  w.fft.fwd(out, w.a);
}

// Wavelet coefficients at scale j, left in w.b (first n entries).
void scale_row(const Plan& p, const Eigen::VectorXcd& spec, Eigen::Index j, Workspace& w) {
  const auto [first, last] = p.band[static_cast<std::size_t>(j)];
  w.a.setZero();
  w.a.segment(first, last - first) =
      spec.segment(first, last - first).cwiseProduct(p.daughter.row(j).segment(first, last - first).transpose().cast<cd>());
  w.fft.inv(w.b, w.a);
}

RowMatrixXcd transform(const Plan& p, const Eigen::VectorXd& x, Workspace& w) {
  Eigen::VectorXcd spec(p.npad);
  spectrum(p, x, w, spec);
  RowMatrixXcd out(p.daughter.rows(), p.n);
  for (Eigen::Index j = 0; j < p.daughter.rows(); ++j) {
    scale_row(p, spec, j, w);
    out.row(j) = w.b.head(p.n).transpose();
  }
  return out;
}

// Time smoothing of one row (complex; a real symmetric kernel keeps real and
// imaginary parts apart, so two real rows can share one transform).
void smooth_time(const Plan& p, Eigen::Index j, Eigen::Ref<Eigen::RowVectorXcd> row, Workspace& w) {
  w.a.setZero();
  w.a.head(p.n) = row.transpose();
  w.fft.fwd(w.b, w.a);
  w.b.array() *= p.smoother.row(j).transpose().array().cast<cd>();
  w.fft.inv(w.a, w.b);
  row = w.a.head(p.n).transpose();
}

Eigen::VectorXd prepare(const Eigen::VectorXd& x, bool remove_trend) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw ValidationError("non-finite value at index " + std::to_string(i));
  }
  const Eigen::VectorXd y = remove_trend ? detrend(x) : x;
  const double mean = y.mean();
  if ((y.array() - mean).abs().maxCoeff() == 0.0) throw ValidationError("coherence input is constant");
  return standardize(y);
}

// Streams the coherence one scale at a time. Rows are smoothed in time into
// a ring of kernel-width rows; once the neighbours of scale j are in, the
// scale smoothing and coherence for j are formed and handed to
// sink(j, coherence_row, cross_row). Nothing scale-by-time is kept here.
template <typename Sink>
void coherence_rows(const Plan& p, const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, Workspace& w, Sink&& sink) {
  const Eigen::Index m = p.daughter.rows();
  const auto width = static_cast<Eigen::Index>(p.kernel.size());
  const Eigen::Index half = width / 2;
  Eigen::VectorXcd spec_x(p.npad), spec_y(p.npad);
  spectrum(p, xs, w, spec_x);
  spectrum(p, ys, w, spec_y);

  RowMatrixXcd cross_ring(width, p.n);
  RowMatrixXcd power_ring(width, p.n);  // |Wx|^2/s + i |Wy|^2/s
  Eigen::VectorXcd wx(p.n);
  Eigen::RowVectorXcd cross(p.n), power(p.n);
  Eigen::RowVectorXd coherence(p.n);

  for (Eigen::Index j = 0; j < m + half; ++j) {
    if (j < m) {
      const double inv_s = 1.0 / p.ws.scales[j];
      const Eigen::Index slot = j % width;
      scale_row(p, spec_x, j, w);
      wx = w.b.head(p.n);
      scale_row(p, spec_y, j, w);
      const auto wy = w.b.head(p.n).array();
      cross_ring.row(slot) = (wx.array() * wy.conjugate() * inv_s).matrix().transpose();
      for (Eigen::Index t = 0; t < p.n; ++t)
        power_ring(slot, t) = cd(std::norm(wx[t]) * inv_s, std::norm(wy[t]) * inv_s);
      smooth_time(p, j, cross_ring.row(slot), w);
      smooth_time(p, j, power_ring.row(slot), w);
    }
    const Eigen::Index out = j - half;
    if (out < 0) continue;

    // Boxcar across scales; weights falling off either end are dropped.
    cross.setZero();
    power.setZero();
    for (Eigen::Index q = 0; q < width; ++q) {
      const Eigen::Index from = out + q - half;
      if (from < 0 || from >= m) continue;
      cross += p.kernel[static_cast<std::size_t>(q)] * cross_ring.row(from % width);
      power += p.kernel[static_cast<std::size_t>(q)] * power_ring.row(from % width);
    }
    for (Eigen::Index t = 0; t < p.n; ++t) {
      const double denom = power[t].real() * power[t].imag();
      const double r = denom > 0.0 ? std::norm(cross[t]) / denom : 0.0;
      coherence[t] = std::clamp(r, 0.0, 1.0);
    }
    sink(out, coherence, cross);
  }
}

// SplitMix64 finaliser, used to derive one independent stream per surrogate.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// SplitMix64 uniforms + Box-Muller: identical surrogates on every platform
// and standard library.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : state_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do u1 = uniform(); while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * pi * u2);
  }

 private:
  double uniform() {
    state_ += 0x9E3779B97F4A7C15ull;
    return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
  }
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct Ar1Fit {
  double g = 0.0;
  double sigma = 1.0;
};

Ar1Fit fit_ar1(const Eigen::VectorXd& x) {
  const auto n = x.size();
  const Eigen::VectorXd c = x.array() - x.mean();
  const double c0 = c.squaredNorm() / static_cast<double>(n);
  const double c1 = c.head(n - 1).dot(c.tail(n - 1)) / static_cast<double>(n - 1);
  Ar1Fit f;
  f.g = c0 > 0.0 ? std::clamp(c1 / c0, -0.999, 0.999) : 0.0;
  f.sigma = std::sqrt((1.0 - f.g * f.g) * c0);
  return f;
}

Eigen::VectorXd ar1_surrogate(const Ar1Fit& f, Eigen::Index n, NormalStream& rng) {
  Eigen::VectorXd out(n);
  // Start from the stationary distribution so no spin-up is needed.
  double v = rng.next() * f.sigma / std::sqrt(1.0 - f.g * f.g);
  for (Eigen::Index t = 0; t < n; ++t) {
    if (t > 0) v = f.g * v + f.sigma * rng.next();
    out[t] = v;
  }
  return out;
}

constexpr int kBins = 10000;

}  // namespace

double morlet_fourier_factor(double omega0) { return 4.0 * pi / (omega0 + std::sqrt(2.0 + omega0 * omega0)); }

WaveletScales dyadic_scales(double min_period, double max_period, int suboctaves, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (!(min_period >= 2.0 * dt)) throw ValidationError("min_period must be at least two samples");
  if (!(max_period > min_period)) throw ValidationError("max_period must exceed min_period");
  if (suboctaves < 1) throw ValidationError("suboctaves must be >= 1");
  WaveletScales w;
  w.dt = dt;
  w.dj = 1.0 / suboctaves;
  const double octaves = std::log2(max_period / min_period);
  const auto j_max = static_cast<Eigen::Index>(std::ceil(octaves * suboctaves - 1e-9));
  const double ff = morlet_fourier_factor();
  w.scales.resize(j_max + 1);
  w.periods.resize(j_max + 1);
  for (Eigen::Index j = 0; j <= j_max; ++j) {
    w.periods[j] = min_period * std::exp2(static_cast<double>(j) * w.dj);
    w.scales[j] = w.periods[j] / ff;
  }
  return w;
}

Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

Eigen::Index next_fast_size(Eigen::Index n) {
  for (Eigen::Index m = std::max<Eigen::Index>(n, 1);; ++m) {
    Eigen::Index r = m;
    for (Eigen::Index f : {2, 3, 5, 7})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

Eigen::MatrixXcd cwt_morlet(const Eigen::VectorXd& series, const Eigen::VectorXd& scales, double dt,
                            Eigen::Index pad_to) {
  if (series.size() < 2) throw ValidationError("cwt needs at least two samples");
  if (pad_to != 0 && pad_to < series.size()) throw ValidationError("pad_to must be 0 or >= the series length");
  ensure_thread_safe_fft();
  Plan p;
  p.n = series.size();
  p.npad = pad_to == 0 ? default_padding(p.n) : pad_to;
  p.dt = dt;
  p.daughter = morlet_daughters(scales, p.npad, dt);
  p.band = nonzero_bands(p.daughter);
  Workspace w(p.npad);
  return Eigen::MatrixXcd(transform(p, series, w));
}

Eigen::VectorXd standardize(const Eigen::VectorXd& x) {
  const double mean = x.mean();
  const Eigen::VectorXd c = x.array() - mean;
  const double sd = std::sqrt(c.squaredNorm() / static_cast<double>(x.size()));
  return sd > 0.0 ? Eigen::VectorXd(c / sd) : Eigen::VectorXd(Eigen::VectorXd::Zero(x.size()));
}

Eigen::VectorXd detrend(const Eigen::VectorXd& x) {
  const auto n = x.size();
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
  const double tm = t.mean();
  const double xm = x.mean();
  const double stt = (t.array() - tm).square().sum();
  const double slope = stt > 0.0 ? ((t.array() - tm) * (x.array() - xm)).sum() / stt : 0.0;
  return (x.array() - xm - slope * (t.array() - tm)).matrix();
}

Eigen::VectorXd cone_of_influence(Eigen::Index n, double dt) {
  const double c = morlet_fourier_factor() / std::sqrt(2.0) * dt;
  Eigen::VectorXd coi(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const auto edge = std::min(t, n - 1 - t);
    coi[t] = c * (edge == 0 ? 1e-5 : static_cast<double>(edge));
  }
  return coi;
}

CoherenceMap wavelet_coherence(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const CoherenceOptions& options) {
  if (x.size() != y.size()) throw ValidationError("coherence inputs differ in length");
  ensure_thread_safe_fft();
  const Plan p = make_plan(x.size(), options);
  Workspace w(p.npad);
  RowMatrixXd coherence(p.daughter.rows(), p.n), phase(p.daughter.rows(), p.n);
  coherence_rows(p, prepare(x, options.detrend), prepare(y, options.detrend), w,
                 [&](Eigen::Index j, const Eigen::RowVectorXd& c, const Eigen::RowVectorXcd& cross) {
                   coherence.row(j) = c;
                   phase.row(j) = cross.unaryExpr([](const cd& v) { return std::arg(v); }).real();
                 });

  CoherenceMap m;
  m.periods = p.ws.periods;
  m.scales = p.ws.scales;
  m.coherence = coherence;
  m.phase = phase;
  m.coi = p.coi;
  return m;
}

double ar1_coefficient(const Eigen::VectorXd& x) {
  if (x.size() < 3) throw ValidationError("lag-1 autocorrelation needs at least three samples");
  return fit_ar1(x).g;
}

Eigen::VectorXd coherence_thresholds(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                     const CoherenceOptions& options, const SignificanceOptions& sig) {
  if (x.size() != y.size()) throw ValidationError("coherence inputs differ in length");
  if (sig.n_surrogates < 100) throw ValidationError("significance needs at least 100 surrogates");
  if (!(sig.alpha > 0.0 && sig.alpha < 1.0)) throw ValidationError("alpha must be in (0, 1)");
  ensure_thread_safe_fft();
  const Plan p = make_plan(x.size(), options);
  const Ar1Fit fx = fit_ar1(prepare(x, options.detrend));
  const Ar1Fit fy = fit_ar1(prepare(y, options.detrend));
  const Eigen::Index m = p.ws.scales.size();

  // Integer counts are summed across threads, so the result does not depend
  // on the thread count or scheduling.
  using Histogram = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Histogram total = Histogram::Zero(m, kBins);
  std::mutex total_mutex;
  std::atomic<int> next{0};
  std::exception_ptr failure;

  std::vector<bool> any_in_coi(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) any_in_coi[static_cast<std::size_t>(j)] = p.in_coi.row(j).any();

  auto worker = [&] {
    try {
      Workspace w(p.npad);
      Histogram h = Histogram::Zero(m, kBins);
      for (int i = next++; i < sig.n_surrogates; i = next++) {
        NormalStream rx(splitmix64(sig.seed ^ splitmix64(2 * static_cast<std::uint64_t>(i))));
        NormalStream ry(splitmix64(sig.seed ^ splitmix64(2 * static_cast<std::uint64_t>(i) + 1)));
        const Eigen::VectorXd sx = standardize(ar1_surrogate(fx, p.n, rx));
        const Eigen::VectorXd sy = standardize(ar1_surrogate(fy, p.n, ry));
        coherence_rows(p, sx, sy, w, [&](Eigen::Index j, const Eigen::RowVectorXd& c, const Eigen::RowVectorXcd&) {
          const bool all = !any_in_coi[static_cast<std::size_t>(j)];
          for (Eigen::Index t = 0; t < p.n; ++t) {
            if (!all && !p.in_coi(j, t)) continue;
            const auto bin = std::min<Eigen::Index>(static_cast<Eigen::Index>(c[t] * kBins), kBins - 1);
            ++h(j, bin);
          }
        });
      }
      std::lock_guard lock(total_mutex);
      total += h;
    } catch (...) {
      std::lock_guard lock(total_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const int n_threads = std::clamp(sig.threads, 1, sig.n_surrogates);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Quantile with linear interpolation inside the bin that crosses 1 - alpha.
  Eigen::VectorXd thresholds(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double count = static_cast<double>(total.row(j).sum());
    const double target = (1.0 - sig.alpha) * count;
    double cum = 0.0;
    thresholds[j] = 1.0;
    for (int b = 0; b < kBins; ++b) {
      const double c = static_cast<double>(total(j, b));
      if (cum + c >= target && c > 0.0) {
        thresholds[j] = (b + (target - cum) / c) / kBins;
        break;
      }
      cum += c;
    }
  }
  return thresholds;
}

Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> significance_mask(CoherenceMap& map, const Eigen::VectorXd& x,
                                                                     const Eigen::VectorXd& y,
                                                                     const CoherenceOptions& options,
                                                                     const SignificanceOptions& sig) {
  map.thresholds = coherence_thresholds(x, y, options, sig);
  if (map.thresholds.size() != map.coherence.rows()) throw ValidationError("coherence map does not match options");
  map.mask.resize(map.coherence.rows(), map.coherence.cols());
  for (Eigen::Index j = 0; j < map.coherence.rows(); ++j) {
    map.mask.row(j) = map.coherence.row(j).array() > map.thresholds[j];
  }
  return map.mask;
}

}  // namespace solarev
