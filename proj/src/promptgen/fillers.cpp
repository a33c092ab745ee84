#include "httplib.h"
#include "json.hpp"
#include "tyfix/promptgen.hpp"

namespace tyfix {

namespace {

std::vector<FillResult> results_from_json(const nlohmann::json& j) {
  std::vector<FillResult> out;
  for (const auto& r : j.at("results")) {
    FillResult f;
    f.fills = r.at("fills").get<std::vector<std::string>>();
    f.score = r.value("score", 0.0);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

TableFiller TableFiller::from_json(const std::string& text) {
  try {
    return TableFiller(results_from_json(nlohmann::json::parse(text)));
  } catch (const nlohmann::json::exception& e) {
    throw FillerError(std::string("bad fill table: ") + e.what());
  }
}

std::vector<FillResult> TableFiller::fill(const CodePrompt& prompt, std::size_t beam) {
  std::vector<FillResult> out;
  for (const auto& r : results_) {
    if (out.size() >= beam) break;
    if (r.fills.size() == prompt.mask_count) out.push_back(r);
  }
  return out;
}

std::vector<FillResult> EchoFiller::fill(const CodePrompt& prompt, std::size_t beam) {
  if (beam == 0) return {};
  FillResult r;
  for (const auto& slot : prompt.slots) r.fills.push_back(placeholder_for(slot));
  r.score = 1.0;
  return {r};
}

std::vector<FillResult> FaultInjectingFiller::fill(const CodePrompt& prompt, std::size_t beam) {
  std::vector<FillResult> out;
  for (auto& r : inner_.fill(prompt, beam)) {
    out.push_back(r);
    if (r.fills.empty()) continue;
    for (auto& f : r.fills) f = kCorruption + f;
    r.score /= 2;
    out.push_back(std::move(r));
  }
  return out;
}

HttpFiller::HttpFiller(std::string url, std::chrono::seconds timeout) : timeout_(timeout) {
  auto scheme = url.find("://");
  auto slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  base_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

std::vector<FillResult> HttpFiller::fill(const CodePrompt& prompt, std::size_t beam) {
  httplib::Client client(base_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  nlohmann::json req{{"prompt", prompt.context}, {"mask_count", prompt.mask_count}, {"beam", beam}};
  auto res = client.Post(path_, req.dump(), "application/json");
  if (!res) throw FillerError("filler request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw FillerError("filler answered HTTP " + std::to_string(res->status));
  std::vector<FillResult> out;
  try {
    out = results_from_json(nlohmann::json::parse(res->body));
  } catch (const nlohmann::json::exception& e) {
    throw FillerError(std::string("bad filler response: ") + e.what());
  }
  std::erase_if(out, [&](const FillResult& r) { return r.fills.size() != prompt.mask_count; });
  if (out.size() > beam) out.resize(beam);
  return out;
}

}  // namespace tyfix
