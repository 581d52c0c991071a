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

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace boost {

// In C++20 the mixed equality templates of boost 1.74 recurse through the
// rewritten reversed candidates; these exact matches take precedence.
inline bool operator==(const rational<std::int64_t>& aLhs, const int aRhs) {
  return aLhs == rational<std::int64_t>(aRhs);
}
inline bool operator==(const rational<std::int64_t>& aLhs, const std::int64_t aRhs) {
  return aLhs == rational<std::int64_t>(aRhs);
}
inline bool operator==(const int aLhs, const rational<std::int64_t>& aRhs) {
  return aRhs == rational<std::int64_t>(aLhs);
}
inline bool operator==(const std::int64_t aLhs, const rational<std::int64_t>& aRhs) {
  return aRhs == rational<std::int64_t>(aLhs);
}

} // namespace boost

namespace lambdamu {

using Rational = boost::rational<std::int64_t>;

struct ArithmeticOverflow : public std::runtime_error {
  explicit ArithmeticOverflow(const std::string& aWhat)
      : std::runtime_error("arithmetic overflow: " + aWhat) {
  }
};

/**
 * Parse an exact rational from text.
 *
 * Accepted forms: integers ("12"), fractions ("3/8"), decimals ("0.35") and
 * decimals with an exponent ("6.3e-6"). Every form is converted without any
 * floating point round trip.
 *
 * \throw std::invalid_argument if the text is not a number.
 */
Rational parseRational(const std::string& aText);

//! "p" for integers, "p/q" otherwise.
std::string toString(const Rational& aValue);

double toDouble(const Rational& aValue) noexcept;

//! Largest integer not greater than aValue.
std::int64_t floorOf(const Rational& aValue) noexcept;

//! Least common multiple of the denominators, 1 if empty.
std::int64_t commonDenominator(const std::vector<Rational>& aValues);

//! aValue * aScale, which must be an integer.
std::int64_t scaleToInteger(const Rational& aValue, std::int64_t aScale);

std::int64_t checkedMul(std::int64_t aLhs, std::int64_t aRhs);
std::int64_t checkedAdd(std::int64_t aLhs, std::int64_t aRhs);

} // namespace lambdamu
