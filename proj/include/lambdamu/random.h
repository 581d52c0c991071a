/*
 lambdamu: joint allocation of stateless and stateful FaaS containers at the edge

 Licensed under the MIT License <http://opensource.org/licenses/MIT>
 Copyright (c) 2026 the lambdamu contributors

 Permission is hereby  granted, free of charge, to any  person obtaining a copy
 of this software and associated  documentation files (the "Software"), to deal
 in the Software  without restriction, including without  limitation the rights
 to  use, copy,  modify, merge,  publish, distribute,  sublicense, and/or  sell
 copies  of  the Software,  and  to  permit persons  to  whom  the Software  is
 furnished to do so, subject to the following conditions:

 The above copyright notice and this permission notice shall be included in all
 copies or substantial portions of the Software.

 THE SOFTWARE  IS PROVIDED "AS  IS", WITHOUT WARRANTY  OF ANY KIND,  EXPRESS OR
 IMPLIED,  INCLUDING BUT  NOT  LIMITED TO  THE  WARRANTIES OF  MERCHANTABILITY,
 FITNESS FOR  A PARTICULAR PURPOSE AND  NONINFRINGEMENT. IN NO EVENT  SHALL THE
 AUTHORS  OR COPYRIGHT  HOLDERS  BE  LIABLE FOR  ANY  CLAIM,  DAMAGES OR  OTHER
 LIABILITY, WHETHER IN AN ACTION OF  CONTRACT, TORT OR OTHERWISE, ARISING FROM,
 OUT OF OR IN CONNECTION WITH THE SOFTWARE  OR THE USE OR OTHER DEALINGS IN THE
 SOFTWARE.
*/

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace lambdamu {

//! One step of the splitmix64 generator, used to derive independent seeds.
inline std::uint64_t splitmix64(std::uint64_t aState) noexcept {
  aState += 0x9e3779b97f4a7c15ULL;
  aState = (aState ^ (aState >> 30)) * 0xbf58476d1ce4e5b9ULL;
  aState = (aState ^ (aState >> 27)) * 0x94d049bb133111ebULL;
  return aState ^ (aState >> 31);
}

inline std::uint64_t deriveSeed(const std::uint64_t aSeed,
                                const std::uint64_t aStream) noexcept {
  return splitmix64(splitmix64(aSeed) ^ splitmix64(aStream + 1));
}

//! Uniform in [0, 1), same sequence on every platform.
inline double uniform01(std::mt19937_64& aRng) noexcept {
  return static_cast<double>(aRng() >> 11) * 0x1.0p-53;
}

//! Uniform integer in [0, aSize), aSize > 0.
inline std::uint64_t uniformIndex(std::mt19937_64& aRng, const std::uint64_t aSize) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(aRng()) * aSize) >> 64);
}

inline double exponential(std::mt19937_64& aRng, const double aMean) noexcept {
  return -std::log1p(-uniform01(aRng)) * aMean;
}

//! Knuth's method for small means, normal approximation above 500.
inline std::uint64_t poisson(std::mt19937_64& aRng, const double aMean) {
  if (aMean <= 0) {
    return 0;
  }
  if (aMean > 500) {
    const auto u = uniform01(aRng), v = uniform01(aRng);
    const auto z = std::sqrt(-2 * std::log1p(-u)) * std::cos(2 * M_PI * v);
    return static_cast<std::uint64_t>(std::max(0.0, std::round(aMean + z * std::sqrt(aMean))));
  }
  const auto    myLimit = std::exp(-aMean);
  std::uint64_t ret     = 0;
  for (auto p = uniform01(aRng); p > myLimit; p *= uniform01(aRng)) {
    ret++;
  }
  return ret;
}

} // namespace lambdamu
