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

// Serves the reference models over the line-delimited JSON wire protocol
// on stdin/stdout. Useful as a stand-in backend and for protocol tests.
//
//   reference_model_server --train corpus.jsonl

#include <iostream>

#include "CLI11.hpp"
#include "cftext/errors.h"
#include "cftext/harness/corpus.h"
#include "cftext/harness/model_suite.h"
#include "cftext/wire.h"

int main(int argc, char** argv) {
  CLI::App app{"Reference model backend over stdin/stdout"};
  std::string train;
  app.add_option("--train", train, "Labeled JSONL corpus")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    const auto suite = cftext::harness::BuildReferenceSuite(
        cftext::harness::LoadCorpus(train));
    std::ios::sync_with_stdio(false);
    cftext::ServeWire(std::cin, std::cout, suite.AsWireBackends());
  } catch (const std::exception& e) {
    std::cerr << "reference_model_server: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
