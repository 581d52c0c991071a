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

#include "lambdamu/rational.h"

#include <boost/integer/common_factor_rt.hpp>

#include <cctype>
#include <cmath>

namespace lambdamu {

namespace {

std::int64_t pow10(int aExp) {
  std::int64_t ret = 1;
  for (int i = 0; i < aExp; i++) {
    ret = checkedMul(ret, 10);
  }
  return ret;
}

} // namespace

std::int64_t checkedMul(const std::int64_t aLhs, const std::int64_t aRhs) {
  std::int64_t ret;
  if (__builtin_mul_overflow(aLhs, aRhs, &ret)) {
    throw ArithmeticOverflow(std::to_string(aLhs) + " * " +
                             std::to_string(aRhs));
  }
  return ret;
}

std::int64_t checkedAdd(const std::int64_t aLhs, const std::int64_t aRhs) {
  std::int64_t ret;
  if (__builtin_add_overflow(aLhs, aRhs, &ret)) {
    throw ArithmeticOverflow(std::to_string(aLhs) + " + " +
                             std::to_string(aRhs));
  }
  return ret;
}

Rational parseRational(const std::string& aText) {
  const auto myError = [&aText]() {
    return std::invalid_argument("invalid number: '" + aText + "'");
  };
  if (aText.empty()) {
    throw myError();
  }

  const auto mySlash = aText.find('/');
  if (mySlash != std::string::npos) {
    const auto myNum = parseRational(aText.substr(0, mySlash));
    const auto myDen = parseRational(aText.substr(mySlash + 1));
    if (myDen == 0) {
      throw myError();
    }
    return myNum / myDen;
  }

  std::size_t  myPos      = 0;
  bool         myNegative = false;
  std::int64_t myMantissa = 0;
  int          myDecimals = 0;
  bool         myDigits   = false;
  if (aText[myPos] == '+' or aText[myPos] == '-') {
    myNegative = aText[myPos] == '-';
    myPos++;
  }
  bool myFraction = false;
  for (; myPos < aText.size(); myPos++) {
    const auto c = aText[myPos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      myMantissa = checkedAdd(checkedMul(myMantissa, 10), c - '0');
      myDigits   = true;
      if (myFraction) {
        myDecimals++;
      }
    } else if (c == '.' and not myFraction) {
      myFraction = true;
    } else {
      break;
    }
  }
  if (not myDigits) {
    throw myError();
  }
  int myExponent = 0;
  if (myPos < aText.size()) {
    if (aText[myPos] != 'e' and aText[myPos] != 'E') {
      throw myError();
    }
    const auto myExpText = aText.substr(myPos + 1);
    if (myExpText.empty()) {
      throw myError();
    }
    std::size_t myUsed = 0;
    try {
      myExponent = std::stoi(myExpText, &myUsed);
    } catch (const std::exception&) {
      throw myError();
    }
    if (myUsed != myExpText.size()) {
      throw myError();
    }
  }
  const auto myScale = myExponent - myDecimals;
  Rational   ret(myNegative ? -myMantissa : myMantissa);
  if (myScale >= 0) {
    ret *= pow10(myScale);
  } else {
    ret /= pow10(-myScale);
  }
  return ret;
}

std::string toString(const Rational& aValue) {
  if (aValue.denominator() == 1) {
    return std::to_string(aValue.numerator());
  }
  return std::to_string(aValue.numerator()) + "/" +
         std::to_string(aValue.denominator());
}

double toDouble(const Rational& aValue) noexcept {
  return static_cast<double>(aValue.numerator()) /
         static_cast<double>(aValue.denominator());
}

std::int64_t floorOf(const Rational& aValue) noexcept {
  const auto myNum = aValue.numerator();
  const auto myDen = aValue.denominator();
  auto       ret   = myNum / myDen;
  if (myNum % myDen != 0 and myNum < 0) {
    ret--;
  }
  return ret;
}

std::int64_t commonDenominator(const std::vector<Rational>& aValues) {
  std::int64_t ret = 1;
  for (const auto& myValue : aValues) {
    const auto myGcd = boost::integer::gcd(ret, myValue.denominator());
    ret              = checkedMul(ret / myGcd, myValue.denominator());
  }
  return ret;
}

std::int64_t scaleToInteger(const Rational& aValue, const std::int64_t aScale) {
  const auto myGcd = boost::integer::gcd(aScale, aValue.denominator());
  if (aValue.denominator() / myGcd != 1) {
    throw std::logic_error("value " + toString(aValue) +
                           " not integral after scaling by " +
                           std::to_string(aScale));
  }
  return checkedMul(aValue.numerator(), aScale / myGcd);
}

} // namespace lambdamu
