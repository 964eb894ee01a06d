#include "sbloc/welch.hpp"

#include <bit>
#include <cmath>
#include <memory>
#include <numbers>

#include <fftw3.h>

#include "sbloc/rng.hpp"

namespace sbloc {

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t t = 0; t < n; ++t)
    w[t] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n)));
  return w;
}

double welch_scale(std::size_t n) {
  double energy = 0.0;
  for (double v : hann_window(n))
    energy += v * v;
  return std::sqrt(2.0 / (static_cast<double>(n) * energy));
}

namespace {

void check_welch_args(const TimeSignals& signals, std::size_t fft_block, double overlap) {
  if (fft_block == 0)
    throw ParameterError("fft_block must be positive");
  if (!(overlap >= 0.0 && overlap < 1.0))
    throw ParameterError("overlap must lie in [0, 1)");
  if (static_cast<std::size_t>(signals.cols()) < fft_block)
    throw InsufficientDataError("need at least " + std::to_string(fft_block) + " samples, got " +
                                std::to_string(signals.cols()));
}

std::size_t hop_of(std::size_t fft_block, double overlap) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround((1.0 - overlap) * fft_block)));
}

} // namespace

CrossSpectralMatrix welch_csm(const TimeSignals& signals, std::size_t fft_block, double overlap,
                              std::size_t band_index, double sampling_rate) {
  check_welch_args(signals, fft_block, overlap);
  const auto n = signals.rows();
  const std::size_t hop = hop_of(fft_block, overlap);
  const std::size_t samples = static_cast<std::size_t>(signals.cols());
  const std::size_t blocks = (samples - fft_block) / hop + 1;

  const auto w = hann_window(fft_block);
  const double scale = welch_scale(fft_block);
  // Windowed DFT kernel for the requested bin.
  Eigen::VectorXcd kernel(static_cast<Eigen::Index>(fft_block));
  for (std::size_t t = 0; t < fft_block; ++t) {
    const double phase = -2.0 * std::numbers::pi * static_cast<double>(band_index * t % fft_block) /
                         static_cast<double>(fft_block);
    kernel(static_cast<Eigen::Index>(t)) = scale * w[t] * std::polar(1.0, phase);
  }

  Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd c(n);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto seg = signals.middleCols(static_cast<Eigen::Index>(b * hop), static_cast<Eigen::Index>(fft_block));
    c.noalias() = seg.cast<Complex>() * kernel;
    lower.selfadjointView<Eigen::Lower>().rankUpdate(c);
  }

  CrossSpectralMatrix csm;
  csm.C.resize(n, n);
  const double inv = 1.0 / static_cast<double>(blocks);
  for (Eigen::Index j = 0; j < n; ++j) {
    csm.C(j, j) = Complex(lower(j, j).real() * inv, 0.0);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      csm.C(i, j) = lower(i, j) * inv;
      csm.C(j, i) = std::conj(csm.C(i, j));
    }
  }
  csm.band_centre = sampling_rate * static_cast<double>(band_index) / static_cast<double>(fft_block);
  csm.block_count = blocks;
  return csm;
}

std::vector<double> welch_auto_spectrum(const TimeSignals& signals, std::size_t channel,
                                        std::size_t fft_block, double overlap) {
  check_welch_args(signals, fft_block, overlap);
  if (channel >= static_cast<std::size_t>(signals.rows()))
    throw DimensionError("channel out of range");
  const std::size_t hop = hop_of(fft_block, overlap);
  const std::size_t samples = static_cast<std::size_t>(signals.cols());
  const std::size_t blocks = (samples - fft_block) / hop + 1;
  const auto w = hann_window(fft_block);
  const double scale = welch_scale(fft_block);
  std::vector<double> power(fft_block / 2 + 1, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t bin = 0; bin <= fft_block / 2; ++bin) {
      Complex acc{};
      for (std::size_t t = 0; t < fft_block; ++t) {
        const double phase = -2.0 * std::numbers::pi * static_cast<double>(bin * t % fft_block) /
                             static_cast<double>(fft_block);
        acc += w[t] * signals(static_cast<Eigen::Index>(channel), static_cast<Eigen::Index>(b * hop + t)) *
               std::polar(1.0, phase);
      }
      power[bin] += std::norm(scale * acc);
    }
  }
  for (auto& p : power)
    p /= static_cast<double>(blocks);
  return power;
}

namespace {

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using FftwPlan = std::unique_ptr<fftw_plan_s, FftwPlanDeleter>;

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr)
    throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

} // namespace

TimeSignals simulate_time_signals(const Scenario& scenario, std::uint64_t seed) {
  scenario.validate();
  const std::size_t samples = scenario.sample_count();
  const std::size_t period = std::bit_ceil(samples);
  const std::size_t bins = period / 2 + 1;
  const auto placement = place_sources(scenario);
  const ArrayGeometry truth = synthesis_geometry(scenario);
  const auto n = truth.size();

  auto real_buf = fftw_buffer<double>(period);
  auto spec_buf = fftw_buffer<fftw_complex>(bins);
  FftwPlan forward(fftw_plan_dft_r2c_1d(static_cast<int>(period), real_buf.get(), spec_buf.get(), FFTW_ESTIMATE));
  FftwPlan backward(fftw_plan_dft_c2r_1d(static_cast<int>(period), spec_buf.get(), real_buf.get(), FFTW_ESTIMATE));

  // Spectrum of each source's unit-variance periodic white noise.
  std::vector<Eigen::VectorXcd> source_spectra;
  for (std::size_t s = 0; s < placement.sources.size(); ++s) {
    SequentialRng rng(seed, Stream::time_signal, s);
    for (std::size_t t = 0; t < period; ++t)
      real_buf[t] = rng.normal();
    fftw_execute(forward.get());
    Eigen::VectorXcd spec(static_cast<Eigen::Index>(bins));
    for (std::size_t k = 0; k < bins; ++k)
      spec(static_cast<Eigen::Index>(k)) = Complex(spec_buf[k][0], spec_buf[k][1]);
    source_spectra.push_back(std::move(spec));
  }

  TimeSignals out = TimeSignals::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(samples));
  const double bin_omega = 2.0 * std::numbers::pi * scenario.sampling_rate / static_cast<double>(period);
  for (std::size_t j = 0; j < n && !placement.sources.empty(); ++j) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(bins));
    for (std::size_t s = 0; s < placement.sources.size(); ++s) {
      const auto& src = placement.sources[s];
      const double r = (src.grid_position - truth.mic_positions[j]).norm();
      if (!(r > 0.0))
        throw GeometryError("source coincides with a microphone");
      // Delay relative to the reference point; amplitude q / r.
      const double tau = (r - src.ref_distance) / scenario.c0;
      const double gain = src.rms_at_1m / r;
      for (std::size_t k = 0; k < bins; ++k)
        acc(static_cast<Eigen::Index>(k)) += gain * source_spectra[s](static_cast<Eigen::Index>(k)) *
                                             std::polar(1.0, -bin_omega * static_cast<double>(k) * tau);
    }
    for (std::size_t k = 0; k < bins; ++k) {
      spec_buf[k][0] = acc(static_cast<Eigen::Index>(k)).real();
      spec_buf[k][1] = acc(static_cast<Eigen::Index>(k)).imag();
    }
    fftw_execute(backward.get());
    const double norm = 1.0 / static_cast<double>(period);
    for (std::size_t t = 0; t < samples; ++t)
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) = real_buf[t] * norm;
  }

  if (scenario.noise && scenario.noise->rms > 0.0) {
    for (std::size_t j = 0; j < n; ++j) {
      SequentialRng rng(scenario.noise->seed, Stream::noise, j);
      for (std::size_t t = 0; t < samples; ++t)
        out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) += scenario.noise->rms * rng.normal();
    }
  }
  return out;
}

} // namespace sbloc
