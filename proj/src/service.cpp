/*
 * Copyright 2026 The CEB Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ceb/service.hpp"

#include <charconv>

#include <fmt/format.h>
#include <httplib.h>

#include "ceb/error.hpp"

namespace ceb {
namespace {

using nlohmann::json;

constexpr std::string_view kIndexPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>ceb</title></head>
<body>
<h1>ceb artifact service</h1>
<p>No UI bundle is mounted. JSON endpoints:</p>
<ul>
<li><a href="/api/summary">/api/summary</a></li>
<li><a href="/api/groups">/api/groups</a></li>
<li><a href="/api/compare">/api/compare</a></li>
<li>/api/groups/{id}/paths</li>
<li><a href="/api/points">/api/points</a> (optionally ?cluster={id})</li>
</ul>
</body></html>
)";

HttpResponse ErrorResponse(int status, std::string_view message) {
  HttpResponse r;
  r.status = status;
  r.body = json{{"error", message}}.dump();
  return r;
}

std::optional<std::size_t> ParseIndex(std::string_view text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

std::uint64_t Fnv1a(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

ArtifactService::ArtifactService(AnalysisArtifact artifact)
    : artifact_(std::move(artifact)), violations_(ValidateArtifact(artifact_)) {
  const json doc = ToJson(artifact_);
  etag_ = fmt::format("\"{:016x}\"", Fnv1a(doc.dump()));
  summary_ = doc.at("summary").dump();
  groups_ = doc.at("original_clusters").dump();
  compare_ = json{{"original", doc.at("original_clusters")},
                  {"flipped", doc.at("flipped_clusters")}}
                 .dump();
  all_points_ = doc.at("points").dump();

  std::map<std::size_t, json> paths, points;
  for (const auto& c : artifact_.original_clusters) {
    paths[c.index] = json::array();
    points[c.index] = json::array();
  }
  for (const auto& p : artifact_.paths) {
    if (paths.contains(p.from_cluster)) paths[p.from_cluster].push_back(ToJson(p));
  }
  for (const auto& p : artifact_.points) {
    if (points.contains(p.original_cluster)) points[p.original_cluster].push_back(ToJson(p));
  }
  for (auto& [index, body] : paths) paths_by_cluster_[index] = body.dump();
  for (auto& [index, body] : points) points_by_cluster_[index] = body.dump();
}

ArtifactService ArtifactService::FromFile(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kFileNotFound, fmt::format("artifact '{}' does not exist", path.string()));
  }
  return ArtifactService(ReadArtifact(path));
}

HttpResponse ArtifactService::Json(std::string body) const {
  HttpResponse r;
  r.body = std::move(body);
  r.etag = etag_;
  return r;
}

HttpResponse ArtifactService::ClusterLookup(std::string_view id_text,
                                            const std::map<std::size_t, std::string>& bodies) const {
  const auto id = ParseIndex(id_text);
  if (!id) return ErrorResponse(400, fmt::format("malformed cluster id '{}'", id_text));
  const auto it = bodies.find(*id);
  if (it == bodies.end()) return ErrorResponse(404, fmt::format("unknown cluster {}", *id));
  return Json(it->second);
}

HttpResponse ArtifactService::Get(std::string_view path,
                                  const std::multimap<std::string, std::string>& query,
                                  std::string_view if_none_match) const {
  if (!path.starts_with("/api/")) return ErrorResponse(404, "not found");
  if (!valid()) {
    json body{{"error", "artifact failed validation"}, {"violations", violations_}};
    return {503, "application/json", body.dump(), ""};
  }

  HttpResponse response;
  if (path == "/api/summary") {
    response = Json(summary_);
  } else if (path == "/api/groups") {
    response = Json(groups_);
  } else if (path == "/api/compare") {
    response = Json(compare_);
  } else if (path == "/api/points") {
    const auto it = query.find("cluster");
    response = it == query.end() ? Json(all_points_) : ClusterLookup(it->second, points_by_cluster_);
  } else if (path.starts_with("/api/groups/") && path.ends_with("/paths")) {
    constexpr std::size_t kPrefix = std::string_view("/api/groups/").size();
    constexpr std::size_t kSuffix = std::string_view("/paths").size();
    if (path.size() < kPrefix + kSuffix) return ErrorResponse(400, "malformed cluster id");
    response = ClusterLookup(path.substr(kPrefix, path.size() - kPrefix - kSuffix),
                             paths_by_cluster_);
  } else {
    return ErrorResponse(404, "not found");
  }

  if (response.status == 200 && !if_none_match.empty() && if_none_match == etag_) {
    response.status = 304;
    response.body.clear();
  }
  return response;
}

struct Server::Impl {
  std::shared_ptr<const ArtifactService> service;
  ServiceConfig config;
  httplib::Server http;
  int port = -1;
};

Server::Server(std::shared_ptr<const ArtifactService> service, ServiceConfig config)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  impl_->config = std::move(config);

  auto handler = [svc = impl_->service](const httplib::Request& req, httplib::Response& res) {
    std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
    const HttpResponse r = svc->Get(req.path, query, req.get_header_value("If-None-Match"));
    res.status = r.status;
    if (!r.etag.empty()) res.set_header("ETag", r.etag);
    if (r.status != 304) res.set_content(r.body, r.content_type);
  };
  impl_->http.Get(R"(/api/.*)", handler);

  const auto& static_dir = impl_->config.static_dir;
  if (!static_dir || !impl_->http.set_mount_point("/", static_dir->string())) {
    impl_->http.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(std::string(kIndexPage), "text/html");
    });
  }
}

Server::~Server() { Stop(); }

int Server::Bind() {
  const auto& cfg = impl_->config;
  if (cfg.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(cfg.bind_address);
  } else {
    impl_->port = impl_->http.bind_to_port(cfg.bind_address, cfg.port) ? cfg.port : -1;
  }
  if (impl_->port < 0) {
    throw std::runtime_error(
        fmt::format("cannot bind {}:{}", cfg.bind_address, cfg.port));
  }
  return impl_->port;
}

void Server::Run() { impl_->http.listen_after_bind(); }

void Server::Stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace ceb
