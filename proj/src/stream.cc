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

#include "hotword/stream.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "hotword/errors.h"
#include "hotword/spectrogram.h"

namespace hotword {

void StreamConfig::Validate() const {
  if (!(window_s > 0.0) || !(hop_s > 0.0) || hop_s > window_s) {
    throw ParamError("stream needs 0 < hop_s <= window_s");
  }
  if (debounce && refractory_s < hop_s) throw ParamError("refractory_s must be >= hop_s");
  if (queue_capacity < 1) throw ParamError("queue capacity must be >= 1");
  if (hop_samples() == 0) throw ParamError("hop shorter than one sample");
}

std::size_t StreamConfig::window_samples() const {
  return static_cast<std::size_t>(std::llround(window_s * kSampleRate));
}

std::size_t StreamConfig::hop_samples() const {
  return static_cast<std::size_t>(std::llround(hop_s * kSampleRate));
}

std::int64_t StreamConfig::refractory_samples() const {
  return debounce ? std::llround(refractory_s * kSampleRate) : 0;
}

std::string FormatEvent(const DetectionEvent& event) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f\t", event.t_start);
  std::string line = buf + event.hotword;
  std::snprintf(buf, sizeof(buf), "\t%.6f\t%.6f", event.score, event.distance);
  return line + buf;
}

ClipSource::ClipSource(const AudioClip& clip) : samples_(Resample(clip, kSampleRate).samples) {}

std::size_t ClipSource::Read(std::span<float> out) {
  const std::size_t n = std::min(out.size(), samples_.size() - pos_);
  std::copy_n(samples_.begin() + static_cast<std::ptrdiff_t>(pos_), n, out.begin());
  pos_ += n;
  return n;
}

std::size_t PcmStreamSource::Read(std::span<float> out) {
  bytes_.resize(out.size() * 2);
  in_.read(bytes_.data(), static_cast<std::streamsize>(bytes_.size()));
  if (in_.bad()) throw IoError("audio input failed");
  const std::size_t n = static_cast<std::size_t>(in_.gcount()) / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = static_cast<std::uint8_t>(bytes_[2 * i]);
    const auto hi = static_cast<std::uint8_t>(bytes_[2 * i + 1]);
    out[i] = static_cast<std::int16_t>(lo | (hi << 8)) / 32768.0f;
  }
  return n;
}

Windower::Windower(std::size_t window, std::size_t hop) : window_(window), hop_(hop) {
  if (window == 0 || hop == 0 || hop > window) throw ParamError("invalid window/hop");
}

void Windower::Push(std::span<const float> samples, std::vector<Window>* out) {
  buffer_.insert(buffer_.end(), samples.begin(), samples.end());
  while (buffer_.size() >= window_) {
    out->push_back({next_start_, std::vector<float>(buffer_.begin(),
                                                    buffer_.begin() + static_cast<std::ptrdiff_t>(window_))});
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(hop_));
    next_start_ += static_cast<std::int64_t>(hop_);
  }
}

std::int64_t NumWindows(std::size_t num_samples, std::size_t window, std::size_t hop) {
  if (num_samples < window) return 0;
  return static_cast<std::int64_t>((num_samples - window) / hop) + 1;
}

bool Debouncer::Admit(const std::string& hotword, std::int64_t start_sample) {
  if (refractory_ <= 0) return true;
  auto it = last_.find(hotword);
  if (it != last_.end() && start_sample - it->second < refractory_) return false;
  last_[hotword] = start_sample;
  return true;
}

WindowQueue::WindowQueue(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ParamError("queue capacity must be >= 1");
}

void WindowQueue::Push(Window window) {
  {
    std::lock_guard lock(mutex_);
    if (windows_.size() == capacity_) {
      windows_.pop_front();
      ++dropped_;
    }
    windows_.push_back(std::move(window));
  }
  ready_.notify_one();
}

std::optional<Window> WindowQueue::Pop() {
  std::unique_lock lock(mutex_);
  ready_.wait(lock, [&] { return closed_ || !windows_.empty(); });
  if (windows_.empty()) return std::nullopt;
  Window w = std::move(windows_.front());
  windows_.pop_front();
  return w;
}

void WindowQueue::Close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  ready_.notify_all();
}

std::size_t WindowQueue::dropped() const {
  std::lock_guard lock(mutex_);
  return dropped_;
}

std::size_t WindowQueue::size() const {
  std::lock_guard lock(mutex_);
  return windows_.size();
}

StreamDetector::StreamDetector(const Embedder& embedder, std::vector<HotwordTemplate> templates,
                               StreamConfig config)
    : embedder_(&embedder),
      templates_(std::move(templates)),
      config_(config),
      debouncer_(config.refractory_samples()) {
  config_.Validate();
  for (const auto& t : templates_) t.Validate();
}

std::vector<MatchResult> StreamDetector::Score(std::span<const float> window) const {
  AudioClip clip{std::vector<float>(window.begin(), window.end()), kSampleRate};
  if (clip.samples.size() != static_cast<std::size_t>(kSampleRate)) clip = FitWindow(clip);
  const Embedding e = embedder_->Embed(LogMel(clip));
  std::vector<MatchResult> results;
  results.reserve(templates_.size());
  for (const auto& t : templates_) results.push_back(Match(e, t));
  return results;
}

std::vector<DetectionEvent> StreamDetector::Process(std::span<const float> window,
                                                    std::int64_t start_sample) {
  if (window.size() != config_.window_samples()) {
    throw ShapeError("window must hold " + std::to_string(config_.window_samples()) + " samples");
  }
  const auto results = Score(window);
  std::vector<DetectionEvent> events;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].accepted) continue;
    if (!debouncer_.Admit(templates_[i].name, start_sample)) continue;
    events.push_back({templates_[i].name, static_cast<double>(start_sample) / kSampleRate,
                      results[i].score, results[i].distance});
  }
  next_start_ = start_sample + static_cast<std::int64_t>(config_.hop_samples());
  ++windows_processed_;
  return events;
}

std::vector<DetectionEvent> StreamDetector::Step(const AudioClip& window) {
  const AudioClip fitted = FitWindow(Resample(window, kSampleRate), config_.window_s);
  return Process(fitted.samples, next_start_);
}

StreamStats RunStream(SampleSource& source, StreamDetector& detector, const EventSink& sink) {
  const StreamConfig& cfg = detector.config();
  Windower windower(cfg.window_samples(), cfg.hop_samples());
  std::vector<float> chunk(cfg.hop_samples());
  std::vector<Window> windows;
  StreamStats stats;
  while (true) {
    const std::size_t n = source.Read(chunk);
    if (n == 0) break;
    windows.clear();
    windower.Push(std::span<const float>(chunk.data(), n), &windows);
    for (const Window& w : windows) {
      for (const auto& event : detector.Process(w.samples, w.start_sample)) sink(event);
      ++stats.windows_processed;
    }
  }
  return stats;
}

StreamStats RunStreamThreaded(SampleSource& source, StreamDetector& detector,
                              const EventSink& sink, const std::atomic<bool>* stop) {
  const StreamConfig& cfg = detector.config();
  WindowQueue queue(cfg.queue_capacity);
  std::exception_ptr producer_error;
  std::atomic<bool> abort{false};

  std::thread producer([&] {
    try {
      Windower windower(cfg.window_samples(), cfg.hop_samples());
      std::vector<float> chunk(cfg.hop_samples());
      std::vector<Window> windows;
      while (!abort.load() && (stop == nullptr || !stop->load())) {
        const std::size_t n = source.Read(chunk);
        if (n == 0) break;
        windows.clear();
        windower.Push(std::span<const float>(chunk.data(), n), &windows);
        for (Window& w : windows) queue.Push(std::move(w));
      }
    } catch (...) {
      producer_error = std::current_exception();
    }
    queue.Close();
  });

  StreamStats stats;
  try {
    while (auto window = queue.Pop()) {
      for (const auto& event : detector.Process(window->samples, window->start_sample)) sink(event);
      ++stats.windows_processed;
    }
  } catch (...) {
    // Unblock and reap the producer before surfacing a consumer failure.
    abort = true;
    queue.Close();
    producer.join();
    throw;
  }
  producer.join();
  stats.windows_dropped = static_cast<std::int64_t>(queue.dropped());
  if (producer_error) std::rethrow_exception(producer_error);
  return stats;
}

}  // namespace hotword
