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

#include "hotword/bench.h"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "hotword/errors.h"

namespace hotword {

namespace {

HotwordTemplate WithCutoff(const HotwordTemplate& t, double cutoff) {
  HotwordTemplate copy = t;
  copy.cutoff = cutoff;
  return copy;
}

void CheckBackground(const AudioClip& background) {
  if (background.duration_s() < kMinBackgroundSeconds) {
    throw ParamError("background audio must be at least 60 s long");
  }
}

std::size_t CountEvents(std::span<const double> scores, double cutoff, const StreamConfig& config) {
  Debouncer debouncer(config.refractory_samples());
  const auto hop = static_cast<std::int64_t>(config.hop_samples());
  std::size_t events = 0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k] >= cutoff && debouncer.Admit("", static_cast<std::int64_t>(k) * hop)) ++events;
  }
  return events;
}

}  // namespace

std::string BenchReport::ToCsv() const {
  std::string out = "cutoff,frr,far_per_hour,n_positives,background_hours\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%.6g,%.6f,%.6f,%zu,%.6f\n", r.cutoff, r.frr,
                  r.far_per_hour, r.n_positives, r.background_hours);
    out += line;
  }
  return out;
}

double FalseRejectionRate(std::size_t rejected, std::size_t total) {
  if (total == 0) throw ParamError("no positive samples");
  if (rejected > total) throw ParamError("more rejections than samples");
  return static_cast<double>(rejected) / static_cast<double>(total);
}

double FalseAcceptsPerHour(std::size_t accepts, double duration_s) {
  if (!(duration_s > 0.0)) throw ParamError("background duration must be positive");
  return static_cast<double>(accepts) / (duration_s / 3600.0);
}

std::vector<double> DefaultCutoffs() {
  std::vector<double> cutoffs;
  for (int i = 1; i <= 19; ++i) cutoffs.push_back(i / 20.0);
  return cutoffs;
}

double BestScore(const AudioClip& clip, const HotwordTemplate& t, const Embedder& embedder) {
  const StreamConfig config;
  StreamDetector detector(embedder, {t}, config);
  const AudioClip audio = Resample(clip, kSampleRate);
  if (audio.samples.size() <= config.window_samples()) {
    return detector.Score(FitWindow(audio, config.window_s).samples)[0].score;
  }
  Windower windower(config.window_samples(), config.hop_samples());
  std::vector<Window> windows;
  windower.Push(audio.samples, &windows);
  double best = 0.0;
  for (const auto& w : windows) best = std::max(best, detector.Score(w.samples)[0].score);
  return best;
}

double MeasureFrr(std::span<const AudioClip> positives, const HotwordTemplate& t,
                  const Embedder& embedder, double cutoff) {
  if (positives.empty()) throw ParamError("no positive samples");
  std::size_t rejected = 0;
  for (const auto& clip : positives) {
    if (BestScore(clip, t, embedder) < cutoff) ++rejected;
  }
  return FalseRejectionRate(rejected, positives.size());
}

double MeasureFar(const AudioClip& background, const HotwordTemplate& t,
                  const Embedder& embedder, double cutoff, const StreamConfig& config) {
  CheckBackground(background);
  StreamDetector detector(embedder, {WithCutoff(t, cutoff)}, config);
  ClipSource source(background);
  std::size_t events = 0;
  RunStream(source, detector, [&](const DetectionEvent&) { ++events; });
  return FalseAcceptsPerHour(events, background.duration_s());
}

BenchReport Sweep(std::span<const AudioClip> positives, const AudioClip& background,
                  const HotwordTemplate& t, const Embedder& embedder,
                  const std::vector<double>& cutoffs, const StreamConfig& config) {
  if (positives.empty()) throw ParamError("no positive samples");
  CheckBackground(background);
  config.Validate();

  std::vector<double> best;
  for (const auto& clip : positives) best.push_back(BestScore(clip, t, embedder));

  StreamDetector detector(embedder, {t}, config);
  const AudioClip audio = Resample(background, kSampleRate);
  Windower windower(config.window_samples(), config.hop_samples());
  std::vector<Window> windows;
  windower.Push(audio.samples, &windows);
  std::vector<double> scores;
  scores.reserve(windows.size());
  const auto started = std::chrono::steady_clock::now();
  for (const auto& w : windows) scores.push_back(detector.Score(w.samples)[0].score);
  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - started;

  BenchReport report;
  report.mean_window_ms = windows.empty() ? 0.0 : elapsed.count() / windows.size();
  for (double cutoff : cutoffs) {
    const auto rejected = static_cast<std::size_t>(
        std::count_if(best.begin(), best.end(), [&](double s) { return s < cutoff; }));
    BenchRow row;
    row.cutoff = cutoff;
    row.frr = FalseRejectionRate(rejected, positives.size());
    row.far_per_hour = FalseAcceptsPerHour(CountEvents(scores, cutoff, config), audio.duration_s());
    row.n_positives = positives.size();
    row.background_hours = audio.duration_s() / 3600.0;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace hotword
