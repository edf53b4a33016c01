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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ceb/report.hpp"

namespace ceb {

struct ServiceConfig {
  std::filesystem::path artifact_path;
  std::string bind_address = "127.0.0.1";
  int port = 8080;  // 0 = let the OS choose
  std::optional<std::filesystem::path> static_dir;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::string etag;
};

// Read-only view over one frozen artifact. Every response body is rendered
// once at construction; requests only look them up, so concurrent reads need
// no locking.
class ArtifactService {
 public:
  // Validates the artifact. An invalid artifact yields a service whose API
  // answers 503 with the list of violations.
  explicit ArtifactService(AnalysisArtifact artifact);

  // Throws FileNotFound / ConsistencyViolation when the file cannot be read.
  static ArtifactService FromFile(const std::filesystem::path& path);

  bool valid() const { return violations_.empty(); }
  const std::vector<std::string>& violations() const { return violations_; }
  const std::string& etag() const { return etag_; }
  const AnalysisArtifact& artifact() const { return artifact_; }

  // Routes a GET request. `query` holds decoded query parameters.
  HttpResponse Get(std::string_view path,
                   const std::multimap<std::string, std::string>& query = {},
                   std::string_view if_none_match = {}) const;

 private:
  HttpResponse Json(std::string body) const;
  HttpResponse ClusterLookup(std::string_view id_text,
                             const std::map<std::size_t, std::string>& bodies) const;

  AnalysisArtifact artifact_;
  std::vector<std::string> violations_;
  std::string etag_;
  std::string summary_, groups_, compare_, all_points_;
  std::map<std::size_t, std::string> paths_by_cluster_;
  std::map<std::size_t, std::string> points_by_cluster_;
};

// HTTP front end over ArtifactService, plus the static UI bundle at "/".
class Server {
 public:
  Server(std::shared_ptr<const ArtifactService> service, ServiceConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the socket; returns the bound port. Throws on failure.
  int Bind();
  // Serves until Stop() is called. Bind() must have succeeded.
  void Run();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// 64-bit FNV-1a, used for ETags.
std::uint64_t Fnv1a(std::string_view bytes);

}  // namespace ceb
