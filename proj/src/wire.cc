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

#include "cftext/wire.h"

#include <csignal>
#include <cstring>
#include <sys/wait.h>
#include <unistd.h>

#include <utility>

#include "cftext/errors.h"

namespace cftext {

using nlohmann::json;

// ---------------------------------------------------------------------------
// SubprocessTransport

SubprocessTransport::SubprocessTransport(const std::string& command) {
  // A dead backend must surface as a GatewayError, not kill the process.
  std::signal(SIGPIPE, SIG_IGN);
  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0) {
    throw GatewayError(std::string("pipe: ") + std::strerror(errno));
  }
  pid_ = fork();
  if (pid_ < 0) throw GatewayError(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  to_child_ = fdopen(to_child[1], "w");
  from_child_ = fdopen(from_child[0], "r");
  if (to_child_ == nullptr || from_child_ == nullptr) {
    throw GatewayError("fdopen failed for model backend pipes");
  }
}

SubprocessTransport::~SubprocessTransport() {
  if (to_child_ != nullptr) std::fclose(to_child_);
  if (from_child_ != nullptr) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

std::string SubprocessTransport::RoundTrip(const std::string& line) {
  std::lock_guard lock(mu_);
  if (std::fwrite(line.data(), 1, line.size(), to_child_) != line.size() ||
      std::fputc('\n', to_child_) == EOF || std::fflush(to_child_) != 0) {
    throw GatewayError("model backend closed its input");
  }
  std::string response;
  int c;
  while ((c = std::fgetc(from_child_)) != EOF && c != '\n') {
    response.push_back(static_cast<char>(c));
  }
  if (c == EOF && response.empty()) {
    throw GatewayError("model backend closed its output");
  }
  return response;
}

// ---------------------------------------------------------------------------
// Server side

namespace {

json Dispatch(const json& request, const WireBackends& b) {
  const std::string op = request.at("op").get<std::string>();
  auto need = [](const void* p, const char* what) {
    if (p == nullptr) throw GatewayError(std::string("no ") + what + " backend");
  };
  json response;
  if (op == "info") {
    need(b.classifier, "classifier");
    response["num_classes"] = b.classifier->num_classes();
    response["exposes_attention"] = b.classifier->capabilities().exposes_attention;
    response["exposes_cls_embedding"] =
        b.classifier->capabilities().exposes_cls_embedding;
    response["embedding_dimension"] =
        b.embedder != nullptr ? b.embedder->dimension() : 0;
  } else if (op == "predict_proba") {
    need(b.classifier, "classifier");
    const auto texts = request.at("texts").get<std::vector<std::string>>();
    response["probs"] = b.classifier->PredictProbaBatch(texts);
  } else if (op == "attention") {
    need(b.classifier, "classifier");
    response["weights"] =
        b.classifier->Attention(request.at("text").get<std::string>());
  } else if (op == "fill_mask") {
    const std::string variant = request.value("variant", "finetuned");
    const MaskFillerGateway* filler =
        variant == "pretrained" ? b.pretrained_filler : b.finetuned_filler;
    need(filler, "mask filler");
    const auto tokens = request.at("tokens").get<std::vector<std::string>>();
    std::vector<std::string> gaps(tokens.size(), " ");
    if (!gaps.empty()) gaps.front().clear();
    const TokenSequence masked(tokens, std::move(gaps), "");
    json candidates = json::array();
    for (const auto& p : filler->TopCandidates(masked, request.at("k").get<int>())) {
      candidates.push_back(
          {{"token", p.token}, {"score", p.score}, {"index", p.vocab_index}});
    }
    response["candidates"] = std::move(candidates);
  } else if (op == "embed") {
    const auto texts = request.at("texts").get<std::vector<std::string>>();
    json vectors = json::array();
    if (request.value("source", "sentence") == "cls") {
      need(b.classifier, "classifier");
      for (const auto& t : texts) vectors.push_back(b.classifier->ClsEmbedding(t));
    } else {
      need(b.embedder, "embedder");
      for (const auto& t : texts) vectors.push_back(b.embedder->Embed(t));
    }
    response["vectors"] = std::move(vectors);
  } else if (op == "perplexity") {
    need(b.scorer, "fluency scorer");
    json values = json::array();
    for (const auto& t : request.at("texts").get<std::vector<std::string>>()) {
      values.push_back(b.scorer->Perplexity(t));
    }
    response["values"] = std::move(values);
  } else {
    throw InputError("unknown op '" + op + "'");
  }
  return response;
}

}  // namespace

std::string HandleWireRequest(const std::string& line,
                              const WireBackends& backends) {
  json id = nullptr;
  json response;
  try {
    const json request = json::parse(line);
    id = request.value("id", json(nullptr));
    response = Dispatch(request, backends);
  } catch (const std::exception& e) {
    response = json{{"error", e.what()}};
  }
  response["id"] = id;
  return response.dump(-1, ' ', false, json::error_handler_t::replace);
}

void ServeWire(std::istream& in, std::ostream& out,
               const WireBackends& backends) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << HandleWireRequest(line, backends) << '\n' << std::flush;
  }
}

// ---------------------------------------------------------------------------
// Client side

WireClient::WireClient(std::shared_ptr<LineTransport> transport)
    : transport_(std::move(transport)) {
  info_ = Call("info", json::object());
}

json WireClient::Call(std::string_view op, json params) const {
  const long long id = next_id_.fetch_add(1);
  params["id"] = id;
  params["op"] = op;
  std::string answer;
  try {
    answer = transport_->RoundTrip(params.dump());
  } catch (const json::exception& e) {
    throw InputError(std::string("request is not valid UTF-8 JSON: ") + e.what());
  }
  json response;
  try {
    response = json::parse(answer);
  } catch (const json::exception& e) {
    throw GatewayError(std::string("malformed backend response: ") + e.what());
  }
  if (!response.is_object() || response.value("id", json(nullptr)) != id) {
    throw GatewayError("backend response does not echo request id " +
                       std::to_string(id));
  }
  if (response.contains("error")) {
    throw GatewayError("backend error on " + std::string(op) + ": " +
                       response["error"].get<std::string>());
  }
  return response;
}

namespace {

template <typename T>
T Field(const json& response, const char* key) {
  try {
    return response.at(key).get<T>();
  } catch (const json::exception& e) {
    throw GatewayError(std::string("backend response field '") + key +
                       "': " + e.what());
  }
}

}  // namespace

WireClassifier::WireClassifier(std::shared_ptr<const WireClient> client)
    : client_(std::move(client)) {
  const auto& info = client_->info();
  num_classes_ = Field<int>(info, "num_classes");
  caps_.exposes_attention = info.value("exposes_attention", false);
  caps_.exposes_cls_embedding = info.value("exposes_cls_embedding", false);
}

std::vector<double> WireClassifier::DoPredictProba(std::string_view text) const {
  const std::string t(text);
  return DoPredictProbaBatch(std::span<const std::string>(&t, 1)).at(0);
}

std::vector<std::vector<double>> WireClassifier::DoPredictProbaBatch(
    std::span<const std::string> texts) const {
  const auto response = client_->Call(
      "predict_proba", {{"texts", std::vector<std::string>(texts.begin(), texts.end())}});
  return Field<std::vector<std::vector<double>>>(response, "probs");
}

std::vector<double> WireClassifier::DoAttention(std::string_view text) const {
  return Field<std::vector<double>>(
      client_->Call("attention", {{"text", std::string(text)}}), "weights");
}

std::vector<double> WireClassifier::DoClsEmbedding(std::string_view text) const {
  const auto response = client_->Call(
      "embed", {{"texts", json::array({std::string(text)})}, {"source", "cls"}});
  return Field<std::vector<std::vector<double>>>(response, "vectors").at(0);
}

WireMaskFiller::WireMaskFiller(std::shared_ptr<const WireClient> client,
                               std::string variant)
    : client_(std::move(client)), variant_(std::move(variant)) {}

std::vector<FillProposal> WireMaskFiller::DoTopCandidates(
    const TokenSequence& masked, std::size_t, int k) const {
  const std::vector<std::string> tokens(masked.tokens().begin(),
                                        masked.tokens().end());
  const auto response = client_->Call(
      "fill_mask", {{"tokens", tokens}, {"k", k}, {"variant", variant_}});
  std::vector<FillProposal> out;
  for (const auto& c : Field<json>(response, "candidates")) {
    out.push_back({Field<std::string>(c, "token"), Field<double>(c, "score"),
                   Field<int>(c, "index")});
  }
  return out;
}

WireEmbedder::WireEmbedder(std::shared_ptr<const WireClient> client)
    : client_(std::move(client)),
      dimension_(Field<std::size_t>(client_->info(), "embedding_dimension")) {}

std::vector<double> WireEmbedder::DoEmbed(std::string_view text) const {
  const auto response = client_->Call(
      "embed", {{"texts", json::array({std::string(text)})}, {"source", "sentence"}});
  return Field<std::vector<std::vector<double>>>(response, "vectors").at(0);
}

WireFluencyScorer::WireFluencyScorer(std::shared_ptr<const WireClient> client)
    : client_(std::move(client)) {}

double WireFluencyScorer::DoPerplexity(std::string_view text) const {
  const auto response =
      client_->Call("perplexity", {{"texts", json::array({std::string(text)})}});
  return Field<std::vector<double>>(response, "values").at(0);
}

}  // namespace cftext
