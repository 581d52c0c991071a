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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lambdamu {

using NodeId = std::int64_t;
using AppId  = std::int64_t;

//! Milliseconds.
using TimeMs = std::int64_t;

//! The implicit cloud node.
inline constexpr NodeId CLOUD = 0;

enum class Mode {
  Lambda = 0, //!< stateless
  Mu     = 1, //!< stateful
};

std::string toString(Mode aMode);
Mode        modeFromString(const std::string& aText);

inline Mode flip(const Mode aMode) noexcept {
  return aMode == Mode::Lambda ? Mode::Mu : Mode::Lambda;
}

struct InvalidConfiguration : public std::invalid_argument {
  explicit InvalidConfiguration(const std::string& aWhat)
      : std::invalid_argument("invalid configuration: " + aWhat) {
  }
};

struct DomainError : public std::domain_error {
  explicit DomainError(const std::string& aWhat)
      : std::domain_error(aWhat) {
  }
};

struct LookupError : public std::out_of_range {
  explicit LookupError(const std::string& aWhat)
      : std::out_of_range(aWhat) {
  }
};

//! An input file does not conform to its format.
struct ParseError : public std::runtime_error {
  ParseError(const std::size_t aLine, const std::string& aWhat)
      : std::runtime_error("line " + std::to_string(aLine) + ": " + aWhat)
      , theLine(aLine) {
  }
  std::size_t theLine;
};

} // namespace lambdamu
