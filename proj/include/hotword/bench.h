// Copyright (c) 2026 The Hotword Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HOTWORD_BENCH_H_
#define HOTWORD_BENCH_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hotword/audio.h"
#include "hotword/matcher.h"
#include "hotword/model.h"
#include "hotword/stream.h"

namespace hotword {

// Backgrounds shorter than this are rejected by the FAR measurements.
inline constexpr double kMinBackgroundSeconds = 60.0;

struct BenchRow {
  double cutoff = 0.0;
  double frr = 0.0;
  double far_per_hour = 0.0;
  std::size_t n_positives = 0;
  double background_hours = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  // Mean wall time of log-mel + embed + match per background window.
  double mean_window_ms = 0.0;

  // Header `cutoff,frr,far_per_hour,n_positives,background_hours`.
  std::string ToCsv() const;
};

double FalseRejectionRate(std::size_t rejected, std::size_t total);
double FalseAcceptsPerHour(std::size_t accepts, double duration_s);

// 0.05, 0.10, ..., 0.95.
std::vector<double> DefaultCutoffs();

// Highest score over the clip's stream windows; clips of at most one window
// are fitted to one window first.
double BestScore(const AudioClip& clip, const HotwordTemplate& t, const Embedder& embedder);

// Fraction of positives with no window scoring >= cutoff.
double MeasureFrr(std::span<const AudioClip> positives, const HotwordTemplate& t,
                  const Embedder& embedder, double cutoff);

// Detection events (after debouncing unless config.debounce is false) per
// hour of background audio.
double MeasureFar(const AudioClip& background, const HotwordTemplate& t,
                  const Embedder& embedder, double cutoff, const StreamConfig& config = {});

// One row per cutoff. Window scores are computed once and thresholded per
// cutoff with the same debouncing as the stream detector.
BenchReport Sweep(std::span<const AudioClip> positives, const AudioClip& background,
                  const HotwordTemplate& t, const Embedder& embedder,
                  const std::vector<double>& cutoffs = DefaultCutoffs(),
                  const StreamConfig& config = {});

}  // namespace hotword

#endif  // HOTWORD_BENCH_H_
