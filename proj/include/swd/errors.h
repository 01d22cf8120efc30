// swd/errors.h

// Copyright 2026  swdecode authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SWD_ERRORS_H_
#define SWD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace swd {

// Malformed input data or files (exit code 2 at the CLI).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decoding produced no usable result (exit code 3 at the CLI).
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Determinization exceeded its state budget.
class DeterminizeOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swd

#endif  // SWD_ERRORS_H_
