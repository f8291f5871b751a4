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

// Command-line front end: enrollment, file and live detection, FRR/FAR
// benchmarking, spectrogram dumps, dataset synthesis and model fixtures.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hotword/audio.h"
#include "hotword/bench.h"
#include "hotword/errors.h"
#include "hotword/matcher.h"
#include "hotword/model.h"
#include "hotword/spectrogram.h"
#include "hotword/stream.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

std::atomic<bool> g_stop{false};

void HandleSignal(int) { g_stop = true; }

std::vector<hotword::HotwordTemplate> LoadTemplates(const std::string& dir, double cutoff) {
  auto templates = hotword::LoadTemplateDir(dir);
  if (templates.empty()) throw hotword::TemplateError("no .ewnt templates in " + dir);
  if (cutoff > 0.0) {
    for (auto& t : templates) t.cutoff = cutoff;
  }
  return templates;
}

void PrintEvent(const hotword::DetectionEvent& event) {
  std::cout << hotword::FormatEvent(event) << std::endl;
}

}  // namespace

int main(int argc, char* argv[]) {
  CLI::App app{"One-shot hotword detection engine"};
  app.require_subcommand(1);

  std::string model, out, wav, templates_dir, template_path, name;
  std::vector<std::string> refs;
  double tau = hotword::kDefaultTau;
  double cutoff = hotword::kDefaultCutoff;
  double cutoff_override = 0.0;

  auto* enroll = app.add_subcommand("enroll", "Enroll a hotword from reference recordings");
  enroll->add_option("--name", name, "Hotword name")->required();
  enroll->add_option("--refs", refs, "Reference WAV files")->required()->delimiter(',');
  enroll->add_option("--model", model, "EWN1 weight file")->required();
  enroll->add_option("--out", out, "Output .ewnt template")->required();
  enroll->add_option("--tau", tau, "Distance at which the score is 0.5");
  enroll->add_option("--cutoff", cutoff, "Acceptance score");

  auto* detect = app.add_subcommand("detect", "Detect enrolled hotwords in a WAV file");
  detect->add_option("--wav", wav, "Input WAV")->required();
  detect->add_option("--model", model, "EWN1 weight file")->required();
  detect->add_option("--templates", templates_dir, "Directory of .ewnt templates")->required();
  detect->add_option("--cutoff", cutoff_override, "Override every template's cutoff");

  std::string input = "mic", device = "-";
  auto* listen = app.add_subcommand(
      "listen", "Detect hotwords in live 16 kHz s16le mono PCM (stdin or a device/FIFO path)");
  listen->add_option("--input", input, "Input kind")->check(CLI::IsMember({"mic"}));
  listen->add_option("--device", device, "PCM stream path, '-' for stdin");
  listen->add_option("--model", model, "EWN1 weight file")->required();
  listen->add_option("--templates", templates_dir, "Directory of .ewnt templates")->required();
  listen->add_option("--cutoff", cutoff_override, "Override every template's cutoff");

  std::string positives, background;
  bool no_debounce = false;
  auto* bench = app.add_subcommand("bench", "FRR/FAR sweep over score cutoffs");
  bench->add_option("--positives", positives, "Directory of positive WAV clips")->required();
  bench->add_option("--background", background, "Hotword-free background WAV (>= 60 s)")->required();
  bench->add_option("--model", model, "EWN1 weight file")->required();
  bench->add_option("--template", template_path, ".ewnt template")->required();
  bench->add_option("--out", out, "Output CSV")->required();
  bench->add_flag("--no-debounce", no_debounce, "Count every accepted window");

  auto* spectrogram = app.add_subcommand("spectrogram", "Dump a 98x64 log-mel spectrogram");
  spectrogram->add_option("--wav", wav, "Input WAV")->required();
  spectrogram->add_option("--out", out, "Output raw float32 file")->required();

  std::string words, noises;
  std::uint64_t seed = 0;
  int per_word = 5;
  auto* synth = app.add_subcommand("synth", "Synthesize a noisy word dataset");
  synth->add_option("--words", words, "Clean word recordings")->required();
  synth->add_option("--noises", noises, "Noise recordings")->required();
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_option("--seed", seed, "PRNG seed")->required();
  synth->add_option("--per-word", per_word, "Variants per word");

  auto* init_model = app.add_subcommand("init-model", "Write a calibrated random EWN1 model");
  init_model->add_option("--seed", seed, "PRNG seed")->required();
  init_model->add_option("--out", out, "Output EWN1 file")->required();

  auto* shapes = app.add_subcommand("shapes", "Print the network's shape chain");
  shapes->add_option("--model", model, "EWN1 weight file (default: architecture table)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::cout << app.help();
      return kExitOk;
    }
    std::cerr << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    using namespace hotword;
    if (*enroll) {
      const Embedder embedder(LoadWeights(model));
      std::vector<AudioClip> clips;
      for (const auto& path : refs) clips.push_back(ReadWav(path));
      const HotwordTemplate t = Enroll(name, clips, embedder, tau, cutoff);
      SaveTemplate(t, out);
      std::cerr << "enrolled '" << t.name << "' with " << t.refs.size() << " reference(s)\n";
    } else if (*detect) {
      const Embedder embedder(LoadWeights(model));
      StreamDetector detector(embedder, LoadTemplates(templates_dir, cutoff_override));
      ClipSource source(ReadWav(wav));
      RunStream(source, detector, PrintEvent);
    } else if (*listen) {
      const Embedder embedder(LoadWeights(model));
      StreamDetector detector(embedder, LoadTemplates(templates_dir, cutoff_override));
      std::ifstream file;
      if (device != "-") {
        file.open(device, std::ios::binary);
        if (!file) throw IoError("cannot open " + device);
      }
      PcmStreamSource source(device == "-" ? std::cin : file);
      std::signal(SIGINT, HandleSignal);
      const StreamStats stats = RunStreamThreaded(source, detector, PrintEvent, &g_stop);
      std::cerr << stats.windows_processed << " windows, " << stats.windows_dropped
                << " dropped\n";
    } else if (*bench) {
      const Embedder embedder(LoadWeights(model));
      std::vector<AudioClip> clips;
      for (const auto& path : ListWavFiles(positives)) clips.push_back(ReadWav(path));
      StreamConfig config;
      config.debounce = !no_debounce;
      const BenchReport report = Sweep(clips, ReadWav(background), LoadTemplate(template_path),
                                       embedder, DefaultCutoffs(), config);
      std::ofstream csv(out, std::ios::binary | std::ios::trunc);
      csv << report.ToCsv();
      if (!csv) throw IoError("cannot write " + out);
      std::cerr << "mean per-window time: " << report.mean_window_ms << " ms\n";
    } else if (*spectrogram) {
      const AudioClip clip = FitWindow(Resample(ReadWav(wav), kSampleRate));
      WriteSpectrogram(out, LogMel(clip));
    } else if (*synth) {
      SynthOptions options;
      options.seed = seed;
      options.per_word = per_word;
      const auto rows = SynthDataset(words, noises, out, options);
      std::cerr << rows.size() << " clips written to " << out << "\n";
    } else if (*init_model) {
      SaveWeights(RandomWeights(seed), out);
    } else if (*shapes) {
      const auto chain = model.empty() ? IntermediateShapes() : Embedder(LoadWeights(model)).Shapes();
      for (const auto& s : chain) {
        std::cout << s.layer << "\t" << s.h << "x" << s.w << "x" << s.c << "\n";
      }
    }
  } catch (const hotword::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
