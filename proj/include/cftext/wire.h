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

#ifndef CFTEXT_WIRE_H_
#define CFTEXT_WIRE_H_

#include <atomic>
#include <cstdio>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <sys/types.h>

#include "cftext/gateways.h"
#include "json.hpp"

namespace cftext {

// Line-delimited JSON protocol to out-of-process model backends.
//
// Every request is one JSON object on one line carrying "id" (integer,
// echoed back) and "op". Responses are one line each; failures carry
// {"id", "error": message}. Text travels as raw UTF-8.
//
//   op            request fields                 response fields
//   info          -                              num_classes,
//                                                exposes_attention,
//                                                exposes_cls_embedding,
//                                                embedding_dimension
//   predict_proba texts: [str]                   probs: [[num]]
//   attention     text: str                      weights: [num]
//   fill_mask     tokens: [str] (one "[MASK]"),  candidates: [{token, score,
//                 k: int, variant:               index}]
//                 "pretrained"|"finetuned"
//   embed         texts: [str], source:          vectors: [[num]]
//                 "sentence"|"cls"
//   perplexity    texts: [str]                   values: [num]
//
// Tokens exchanged with fill_mask follow the shared tokenizer.

class LineTransport {
 public:
  virtual ~LineTransport() = default;
  // Sends one request line (no trailing newline) and returns the response
  // line. Implementations serialize concurrent callers.
  virtual std::string RoundTrip(const std::string& line) = 0;
};

// Spawns `/bin/sh -c command` and talks to it over stdin/stdout.
class SubprocessTransport : public LineTransport {
 public:
  explicit SubprocessTransport(const std::string& command);
  ~SubprocessTransport() override;

  SubprocessTransport(const SubprocessTransport&) = delete;
  SubprocessTransport& operator=(const SubprocessTransport&) = delete;

  std::string RoundTrip(const std::string& line) override;

 private:
  std::mutex mu_;
  pid_t pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

// Model backends a server answers for. Any may be null; requests needing
// a missing backend get an error response.
struct WireBackends {
  const ClassifierGateway* classifier = nullptr;
  const MaskFillerGateway* pretrained_filler = nullptr;
  const MaskFillerGateway* finetuned_filler = nullptr;
  const EmbedderGateway* embedder = nullptr;
  const FluencyScorerGateway* scorer = nullptr;
};

// Answers one request line. Never throws; errors become error responses.
std::string HandleWireRequest(const std::string& line,
                              const WireBackends& backends);

// Request/response loop until end of input.
void ServeWire(std::istream& in, std::ostream& out,
               const WireBackends& backends);

// In-process transport calling HandleWireRequest directly.
class LoopbackTransport : public LineTransport {
 public:
  explicit LoopbackTransport(WireBackends backends) : backends_(backends) {}
  std::string RoundTrip(const std::string& line) override {
    return HandleWireRequest(line, backends_);
  }

 private:
  WireBackends backends_;
};

class WireClient {
 public:
  explicit WireClient(std::shared_ptr<LineTransport> transport);

  // Sends {"id", "op", ...params} and returns the response object. Throws
  // GatewayError on transport failure, id mismatch or an error response.
  nlohmann::json Call(std::string_view op, nlohmann::json params) const;
  const nlohmann::json& info() const { return info_; }

 private:
  std::shared_ptr<LineTransport> transport_;
  mutable std::atomic<long long> next_id_{1};
  nlohmann::json info_;
};

class WireClassifier : public ClassifierGateway {
 public:
  explicit WireClassifier(std::shared_ptr<const WireClient> client);
  int num_classes() const override { return num_classes_; }
  ClassifierCapabilities capabilities() const override { return caps_; }

 protected:
  std::vector<double> DoPredictProba(std::string_view text) const override;
  std::vector<std::vector<double>> DoPredictProbaBatch(
      std::span<const std::string> texts) const override;
  std::vector<double> DoAttention(std::string_view text) const override;
  std::vector<double> DoClsEmbedding(std::string_view text) const override;

 private:
  std::shared_ptr<const WireClient> client_;
  int num_classes_;
  ClassifierCapabilities caps_;
};

class WireMaskFiller : public MaskFillerGateway {
 public:
  // variant is "pretrained" or "finetuned".
  WireMaskFiller(std::shared_ptr<const WireClient> client, std::string variant);

 protected:
  std::vector<FillProposal> DoTopCandidates(const TokenSequence& masked,
                                            std::size_t mask_position,
                                            int k) const override;

 private:
  std::shared_ptr<const WireClient> client_;
  std::string variant_;
};

class WireEmbedder : public EmbedderGateway {
 public:
  explicit WireEmbedder(std::shared_ptr<const WireClient> client);
  std::size_t dimension() const override { return dimension_; }

 protected:
  std::vector<double> DoEmbed(std::string_view text) const override;

 private:
  std::shared_ptr<const WireClient> client_;
  std::size_t dimension_;
};

class WireFluencyScorer : public FluencyScorerGateway {
 public:
  explicit WireFluencyScorer(std::shared_ptr<const WireClient> client);

 protected:
  double DoPerplexity(std::string_view text) const override;

 private:
  std::shared_ptr<const WireClient> client_;
};

}  // namespace cftext

#endif  // CFTEXT_WIRE_H_
