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

#ifndef HOTWORD_SRC_FFT_H_
#define HOTWORD_SRC_FFT_H_

#include <complex>
#include <vector>

namespace hotword::internal {

// In-place iterative radix-2 FFT for a fixed power-of-two size.
class Fft {
 public:
  explicit Fft(int size);

  int size() const { return size_; }
  void Forward(std::vector<std::complex<double>>* data) const;

 private:
  int size_;
  std::vector<int> bit_reverse_;
  std::vector<std::complex<double>> twiddles_;
};

}  // namespace hotword::internal

#endif  // HOTWORD_SRC_FFT_H_
