// Copyright 2026 The cftext Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFTEXT_ERRORS_H_
#define CFTEXT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace cftext {

// Malformed or out-of-contract input (bad config, empty text, bad index).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A model backend failed or could not be reached.
class GatewayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The classifier lacks a capability (attention, CLS embedding) an
// operation depends on.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An embedding has zero norm, so cosine similarity is undefined.
class DegenerateEmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The mask filler produced no usable substitute for a position.
class EmptyProposalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cftext

#endif  // CFTEXT_ERRORS_H_
