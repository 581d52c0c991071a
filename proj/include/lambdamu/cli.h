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

#include <iosfwd>
#include <string>
#include <vector>

namespace lambdamu {

inline constexpr const char* VERSION = "1.0.0";

/**
 * Entry point of the command-line tool, aArgs[0] being the program name.
 *
 * \return 0 on success, 1 on solver or runtime errors, 2 on usage, I/O or
 *         input format errors.
 */
int runCli(const std::vector<std::string>& aArgs, std::ostream& aStdout, std::ostream& aStderr);

} // namespace lambdamu
