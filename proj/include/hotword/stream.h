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

#ifndef HOTWORD_STREAM_H_
#define HOTWORD_STREAM_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hotword/audio.h"
#include "hotword/matcher.h"
#include "hotword/model.h"

namespace hotword {

struct StreamConfig {
  double window_s = 1.0;
  double hop_s = 0.25;
  double refractory_s = 1.0;
  std::size_t queue_capacity = 8;  // windows
  // When false every accepted window is reported (no refractory period).
  bool debounce = true;

  // hop <= window, refractory >= hop when debouncing, capacity >= 1.
  void Validate() const;
  std::size_t window_samples() const;
  std::size_t hop_samples() const;
  std::int64_t refractory_samples() const;
};

struct DetectionEvent {
  std::string hotword;
  double t_start = 0.0;  // seconds from stream start
  double score = 0.0;
  double distance = 0.0;
};

// "t_start_s\thotword\tscore\tdistance" without a trailing newline.
std::string FormatEvent(const DetectionEvent& event);

// Pull-based 16 kHz mono sample provider. Read fills up to out.size()
// samples and returns how many it wrote; 0 means end of stream. Failures
// are reported by throwing.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  virtual std::size_t Read(std::span<float> out) = 0;
};

// Serves a clip (resampled to 16 kHz) from memory.
class ClipSource final : public SampleSource {
 public:
  explicit ClipSource(const AudioClip& clip);
  std::size_t Read(std::span<float> out) override;

 private:
  std::vector<float> samples_;
  std::size_t pos_ = 0;
};

// Raw signed 16-bit little-endian mono PCM at 16 kHz, e.g. the output of
// `arecord -f S16_LE -r 16000 -c 1 -t raw`.
class PcmStreamSource final : public SampleSource {
 public:
  explicit PcmStreamSource(std::istream& in) : in_(in) {}
  std::size_t Read(std::span<float> out) override;

 private:
  std::istream& in_;
  std::vector<char> bytes_;
};

struct Window {
  std::int64_t start_sample = 0;
  std::vector<float> samples;
};

// Cuts a sample stream into windows of `window` samples every `hop` samples;
// window k starts at k * hop.
class Windower {
 public:
  Windower(std::size_t window, std::size_t hop);
  void Push(std::span<const float> samples, std::vector<Window>* out);

 private:
  std::size_t window_;
  std::size_t hop_;
  std::vector<float> buffer_;
  std::int64_t next_start_ = 0;
};

// Number of windows a stream of n samples yields.
std::int64_t NumWindows(std::size_t num_samples, std::size_t window, std::size_t hop);

// Suppresses repeat events for a hotword within the refractory period.
class Debouncer {
 public:
  explicit Debouncer(std::int64_t refractory_samples) : refractory_(refractory_samples) {}
  // True if an event for hotword at start_sample may be emitted; records it.
  bool Admit(const std::string& hotword, std::int64_t start_sample);

 private:
  std::int64_t refractory_;
  std::map<std::string, std::int64_t> last_;
};

// Bounded window queue between the capture producer and the detection
// consumer. Push never blocks: when full, the oldest window is dropped.
class WindowQueue {
 public:
  explicit WindowQueue(std::size_t capacity);

  void Push(Window window);
  // Blocks until a window is available; nullopt once closed and drained.
  std::optional<Window> Pop();
  void Close();

  std::size_t dropped() const;
  std::size_t size() const;

 private:
  const std::size_t capacity_;
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<Window> windows_;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

// Embeds each window, matches it against every template and applies the
// refractory period. The embedder must outlive the detector.
class StreamDetector {
 public:
  StreamDetector(const Embedder& embedder, std::vector<HotwordTemplate> templates,
                 StreamConfig config = {});

  // Processes the window following the previous one (positions advance by
  // one hop per call). The clip is resampled and fitted to the window length.
  std::vector<DetectionEvent> Step(const AudioClip& window);
  // Processes a window starting at the given sample of the stream.
  std::vector<DetectionEvent> Process(std::span<const float> window, std::int64_t start_sample);
  // Per-template match results for one window, without debouncing.
  std::vector<MatchResult> Score(std::span<const float> window) const;

  const StreamConfig& config() const { return config_; }
  const std::vector<HotwordTemplate>& templates() const { return templates_; }
  std::int64_t windows_processed() const { return windows_processed_; }

 private:
  const Embedder* embedder_;
  std::vector<HotwordTemplate> templates_;
  StreamConfig config_;
  Debouncer debouncer_;
  std::int64_t next_start_ = 0;
  std::int64_t windows_processed_ = 0;
};

struct StreamStats {
  std::int64_t windows_processed = 0;
  std::int64_t windows_dropped = 0;
};

using EventSink = std::function<void(const DetectionEvent&)>;

// Single-threaded loop: read a hop, process every completed window in order.
// Deterministic for file sources. A source error propagates after all events
// found so far have been delivered.
StreamStats RunStream(SampleSource& source, StreamDetector& detector, const EventSink& sink);

// Live loop: a producer thread reads the source into a WindowQueue while the
// calling thread embeds and matches. Stops at end of stream or when *stop
// becomes true; source errors are rethrown after the queue is drained.
StreamStats RunStreamThreaded(SampleSource& source, StreamDetector& detector,
                              const EventSink& sink, const std::atomic<bool>* stop = nullptr);

}  // namespace hotword

#endif  // HOTWORD_STREAM_H_
