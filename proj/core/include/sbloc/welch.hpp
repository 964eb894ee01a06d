#pragma once

#include <cstdint>
#include <vector>

#include "sbloc/forward.hpp"

namespace sbloc {

// Welch cross-spectral estimation from time signals.
//
// Each block of N samples is multiplied by a periodic von Hann window
// w[t] = 0.5 (1 - cos(2 pi t / N)) and transformed with the forward DFT
// X_b = sum_t w[t] x[t] exp(-2 pi i b t / N). The spectrum is scaled by
//
//     welch_scale(N) = sqrt(2 / (N * sum_t w[t]^2)) = 4 / (N * sqrt(3))
//
// so that a white channel of unit RMS has an expected power of 2/N in every
// positive-frequency bin, i.e. the bins 1..N/2-1 plus half of DC and Nyquist
// sum to 1. A bin-centred sinusoid of RMS 1 therefore reads 2/3 in its own bin
// (coherent gain 1/4 over incoherent gain 3/8) and 1/6 in each neighbour.
// This is the same per-band scale the block synthesiser uses.

std::vector<double> hann_window(std::size_t n);
double welch_scale(std::size_t n);

using TimeSignals = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Band CSM of the given bin, averaged over all Welch blocks.
CrossSpectralMatrix welch_csm(const TimeSignals& signals, std::size_t fft_block, double overlap,
                              std::size_t band_index, double sampling_rate = 0.0);

/// Averaged auto-power of one channel in every bin 0..N/2.
std::vector<double> welch_auto_spectrum(const TimeSignals& signals, std::size_t channel,
                                        std::size_t fft_block, double overlap);

/// Time-domain microphone signals (n x T) for the scenario: every source
/// emits Gaussian white noise and reaches each microphone with 1/r decay and
/// a fractional delay, applied as a linear phase on a periodic FFT grid.
/// Additive white noise of the scenario's RMS is added per microphone.
TimeSignals simulate_time_signals(const Scenario& scenario, std::uint64_t seed);

} // namespace sbloc
