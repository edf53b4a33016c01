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

#include <doctest.h>

#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ceb/error.hpp"
#include "ceb/service.hpp"
#include "support/synthetic.hpp"

using namespace ceb;
using nlohmann::json;

namespace {

const AnalysisArtifact& Fixture() {
  static const AnalysisArtifact artifact = testing::SmallArtifact(3);
  return artifact;
}

const ArtifactService& Service() {
  static const ArtifactService service(Fixture());
  return service;
}

json Body(const HttpResponse& r) {
  REQUIRE(r.status == 200);
  return json::parse(r.body);
}

}  // namespace

TEST_CASE("Service: summary is the artifact subtree, byte for byte") {
  const std::string path = testing::WriteTempFile("service-artifact.json", "");
  WriteArtifact(Fixture(), path);
  const json reread = json::parse(SerializeArtifact(ReadArtifact(path)));
  const HttpResponse r = Service().Get("/api/summary");
  CHECK(r.status == 200);
  CHECK(r.content_type == "application/json");
  CHECK(r.body == reread.at("summary").dump());
  CHECK(Body(r)["dataset"]["total"] == Fixture().dataset.total);
  CHECK(Body(r)["model"]["test_accuracy"] == Fixture().model.test_accuracy);
}

TEST_CASE("Service: groups, compare, paths conservation over the wire") {
  const json groups = Body(Service().Get("/api/groups"));
  REQUIRE(groups.size() == 4);
  const json compare = Body(Service().Get("/api/compare"));
  CHECK(compare["original"] == groups);
  CHECK(compare["flipped"].size() == Fixture().flipped_clusters.size());

  for (const auto& g : groups) {
    const std::size_t id = g["index"];
    const json paths = Body(Service().Get("/api/groups/" + std::to_string(id) + "/paths"));
    std::size_t total = 0;
    for (const auto& p : paths) {
      CHECK(p["from_cluster"] == id);
      total += p["count"].get<std::size_t>();
    }
    CHECK(total == g["size"].get<std::size_t>());

    const json points = Body(Service().Get("/api/points", {{"cluster", std::to_string(id)}}));
    CHECK(points.size() == g["size"].get<std::size_t>());
    for (const auto& p : points) CHECK(p["original_cluster"] == id);
  }
  CHECK(Body(Service().Get("/api/points")).size() == Fixture().points.size());
}

TEST_CASE("Service: unknown and malformed ids") {
  CHECK(Service().Get("/api/groups/99/paths").status == 404);
  CHECK(Service().Get("/api/groups/abc/paths").status == 400);
  CHECK(Service().Get("/api/groups/-1/paths").status == 400);
  CHECK(Service().Get("/api/groups//paths").status == 400);
  CHECK(Service().Get("/api/points", {{"cluster", "x"}}).status == 400);
  CHECK(Service().Get("/api/points", {{"cluster", "7"}}).status == 404);
  CHECK(Service().Get("/api/unknown").status == 404);
  CHECK(json::parse(Service().Get("/api/groups/99/paths").body).contains("error"));
}

TEST_CASE("Service: ETag and conditional requests") {
  const HttpResponse first = Service().Get("/api/groups");
  CHECK(first.etag == Service().etag());
  CHECK(first.etag == ArtifactService(Fixture()).etag());
  const HttpResponse again = Service().Get("/api/groups", {}, first.etag);
  CHECK(again.status == 304);
  CHECK(again.body.empty());
  CHECK(Service().Get("/api/groups", {}, "\"stale\"").status == 200);
  CHECK(Service().Get("/api/groups").body == first.body);
  CHECK_FALSE(ArtifactService(testing::SmallArtifact(4)).etag() == first.etag);
}

TEST_CASE("Service: invalid artifact answers 503") {
  AnalysisArtifact broken = Fixture();
  broken.original_clusters[0].avg_score += 5.0;
  const ArtifactService service(broken);
  CHECK_FALSE(service.valid());
  for (const char* path : {"/api/summary", "/api/groups", "/api/compare", "/api/points",
                           "/api/groups/0/paths"}) {
    const HttpResponse r = service.Get(path);
    CHECK(r.status == 503);
    CHECK_FALSE(json::parse(r.body)["violations"].empty());
  }
}

TEST_CASE("Service: missing artifact fails at load") {
  try {
    ArtifactService::FromFile("/nonexistent/analysis.json");
    FAIL("expected FileNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFileNotFound);
  }
}

TEST_CASE("Fnv1a reference values") {
  CHECK(Fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(Fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("Server: real socket round trip") {
  auto service = std::make_shared<const ArtifactService>(Fixture());
  ServiceConfig config;
  config.port = 0;
  Server server(service, config);
  const int port = server.Bind();
  REQUIRE(port > 0);
  std::thread runner([&] { server.Run(); });

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  auto groups = client.Get("/api/groups");
  REQUIRE(groups);
  CHECK(groups->status == 200);
  CHECK(groups->body == service->Get("/api/groups").body);
  const std::string etag = groups->get_header_value("ETag");
  CHECK(etag == service->etag());

  auto cached = client.Get("/api/groups", {{"If-None-Match", etag}});
  REQUIRE(cached);
  CHECK(cached->status == 304);

  auto missing = client.Get("/api/groups/99/paths");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  auto index = client.Get("/");
  REQUIRE(index);
  CHECK(index->status == 200);
  CHECK(index->get_header_value("Content-Type").find("text/html") != std::string::npos);

  // Every endpoint answers well inside 50 ms at this scale.
  for (const char* path : {"/api/summary", "/api/groups", "/api/compare", "/api/points",
                           "/api/groups/0/paths", "/api/points?cluster=1"}) {
    const auto start = std::chrono::steady_clock::now();
    auto r = client.Get(path);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(elapsed < std::chrono::milliseconds(50));
  }

  // Concurrent readers see identical bodies.
  const std::string expected = service->Get("/api/points").body;
  std::vector<std::thread> readers;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&] {
      httplib::Client c("127.0.0.1", port);
      for (int i = 0; i < 20; ++i) {
        auto r = c.Get("/api/points");
        if (!r || r->body != expected) ++mismatches;
      }
    });
  }
  for (auto& r : readers) r.join();
  CHECK(mismatches == 0);

  server.Stop();
  runner.join();
}
