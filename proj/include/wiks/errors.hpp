// Copyright 2026 The wiks authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WIKS_ERRORS_HPP
#define WIKS_ERRORS_HPP

#include <stdexcept>

namespace wiks {

// Input files that cannot be read or parsed. The CLI maps this to exit 2.
// Parameter and usage violations use std::invalid_argument (CLI exit 64).
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation whose size exceeds a configured budget or cap. The CLI maps
// this to exit 3. The message suggests reduced settings.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wiks

#endif  // WIKS_ERRORS_HPP
