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

#include "ceb/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "ceb/error.hpp"

namespace ceb {
namespace {

using nlohmann::json;

struct PaletteEntry {
  std::string_view name;
  std::string_view color;
};

constexpr std::array<PaletteEntry, 8> kPalette = {{
    {"Purple Group", "#8e44ad"},
    {"Pink Group", "#e84393"},
    {"Teal Group", "#16a085"},
    {"Orange Group", "#e67e22"},
    {"Blue Group", "#2980b9"},
    {"Green Group", "#27ae60"},
    {"Red Group", "#c0392b"},
    {"Brown Group", "#8d6e63"},
}};

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string FormatAmount(double v) {
  if (v == std::floor(v)) return fmt::format("{:.0f}", v);
  return fmt::format("{:.1f}", v);
}

std::string GenderName(Gender g) { return g == Gender::kMale ? "male" : "female"; }

Gender ParseGender(const std::string& s) {
  if (s == "male") return Gender::kMale;
  if (s == "female") return Gender::kFemale;
  throw Error(ErrorCode::kConsistencyViolation, fmt::format("unknown gender '{}'", s));
}

json GenderCountsJson(const GenderCounts& g) { return {{"male", g.male}, {"female", g.female}}; }

GenderCounts GenderCountsFrom(const json& j) {
  return {j.at("male").get<std::size_t>(), j.at("female").get<std::size_t>()};
}

json ClusterDeltaJson(const ClusterDelta& c) {
  return {{"cluster", c.cluster},
          {"size", c.size},
          {"avg_original_score", c.avg_original_score},
          {"avg_flipped_score", c.avg_flipped_score},
          {"delta", c.delta}};
}

ClusterSummary ClusterSummaryFrom(const json& j) {
  ClusterSummary c;
  c.index = j.at("index").get<std::size_t>();
  c.display_name = j.at("display_name").get<std::string>();
  c.color = j.at("color").get<std::string>();
  c.size = j.at("size").get<std::size_t>();
  c.gender_counts = GenderCountsFrom(j.at("gender_counts"));
  c.avg_score = j.at("avg_score").get<double>();
  c.description = j.at("description").get<std::string>();
  c.y_anchor = j.at("y_anchor").get<double>();
  return c;
}

PathScore PathFrom(const json& j) {
  PathScore p;
  p.from_cluster = j.at("from_cluster").get<std::size_t>();
  p.to_cluster = j.at("to_cluster").get<std::size_t>();
  p.count = j.at("count").get<std::size_t>();
  p.male = j.at("count_by_original_gender").at("male").get<std::size_t>();
  p.female = j.at("count_by_original_gender").at("female").get<std::size_t>();
  p.avg_original_score = j.at("avg_original_score").get<double>();
  p.avg_flipped_score = j.at("avg_flipped_score").get<double>();
  return p;
}

PointRecord PointFrom(const json& j) {
  PointRecord p;
  p.row_id = j.at("row_id").get<RowId>();
  p.gender = ParseGender(j.at("gender").get<std::string>());
  p.flipped_gender = ParseGender(j.at("flipped_gender").get<std::string>());
  p.original_cluster = j.at("original_cluster").get<std::size_t>();
  p.flipped_cluster = j.at("flipped_cluster").get<std::size_t>();
  p.original_score = j.at("original_score").get<double>();
  p.flipped_score = j.at("flipped_score").get<double>();
  p.original_xy = j.at("original_xy").get<Point2>();
  p.flipped_xy = j.at("flipped_xy").get<Point2>();
  return p;
}

ClusterSummary Summarize(std::size_t index, const std::vector<LoanRecord>& members,
                         double avg_score) {
  ClusterSummary c;
  c.index = index;
  c.display_name = DisplayName(index);
  c.color = DisplayColor(index);
  c.size = members.size();
  for (const auto& r : members) ++(r.gender == Gender::kMale ? c.gender_counts.male
                                                              : c.gender_counts.female);
  c.avg_score = avg_score;
  c.y_anchor = avg_score;
  c.description = DescribeCluster(members, avg_score);
  return c;
}

bool Close(double a, double b) { return std::abs(a - b) <= 1e-9; }

}  // namespace

std::string DisplayName(std::size_t cluster) {
  if (cluster < kPalette.size()) return std::string(kPalette[cluster].name);
  return fmt::format("Group {}", cluster + 1);
}

std::string DisplayColor(std::size_t cluster) {
  if (cluster < kPalette.size()) return std::string(kPalette[cluster].color);
  return "#7f8c8d";
}

std::string DescribeCluster(const std::vector<LoanRecord>& members, double avg_score) {
  if (members.empty()) throw Error(ErrorCode::kEmptyCluster, "cannot describe an empty cluster");
  std::size_t male = 0, graduate = 0, self_employed = 0, credit = 0;
  std::vector<double> income, amount, term;
  for (const auto& r : members) {
    male += r.gender == Gender::kMale;
    graduate += r.education == Education::kGraduate;
    self_employed += r.self_employed;
    credit += r.credit_history;
    income.push_back(r.income);
    amount.push_back(r.loan_amount);
    term.push_back(r.loan_term);
  }
  const std::size_t n = members.size();
  auto majority = [n](std::size_t ones) { return 2 * ones >= n; };
  return fmt::format(
      "Mostly {} applicants, mostly {}, mostly {}, mostly {} a credit history; median income "
      "{}/month, median loan {}k over {} months; average score {:.1f}%.",
      majority(male) ? "male" : "female", majority(graduate) ? "graduates" : "non-graduates",
      majority(self_employed) ? "self-employed" : "not self-employed",
      majority(credit) ? "with" : "without", FormatAmount(Median(income)),
      FormatAmount(Median(amount)), FormatAmount(Median(term)), avg_score);
}

double RoundScore(double percent) { return std::round(percent * 1e4) / 1e4; }

AnalysisArtifact BuildArtifact(const ArtifactInputs& in) {
  const CounterfactualResult& cf = in.result;
  std::map<RowId, LoanRecord> by_id;
  for (const auto& r : in.records) by_id[r.row_id] = r;

  // Every number shown downstream is derived from the rounded per-point scores
  // so that the artifact is self-consistent.
  CounterfactualResult rounded;
  rounded.original_assignments = cf.original_assignments;
  rounded.flipped_assignments = cf.flipped_assignments;
  rounded.original_genders = cf.original_genders;
  for (const auto& [id, s] : cf.original_scores) rounded.original_scores[id] = RoundScore(s);
  for (const auto& [id, s] : cf.flipped_scores) rounded.flipped_scores[id] = RoundScore(s);

  AnalysisArtifact a;
  a.dataset = in.dataset;
  a.model = in.model;
  a.config = in.config;

  std::map<std::size_t, std::vector<LoanRecord>> original_members, flipped_members;
  std::map<std::size_t, double> original_sum, flipped_sum;
  for (const auto& [id, cluster] : rounded.original_assignments) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kConsistencyViolation, fmt::format("row {} has no record", id));
    }
    const LoanRecord flipped_record = FlipRecord(it->second, cf.spec);
    const std::size_t to = rounded.flipped_assignments.at(id);
    original_members[cluster].push_back(it->second);
    flipped_members[to].push_back(flipped_record);
    original_sum[cluster] += rounded.original_scores.at(id);
    flipped_sum[to] += rounded.flipped_scores.at(id);

    PointRecord p;
    p.row_id = id;
    p.gender = it->second.gender;
    p.flipped_gender = flipped_record.gender;
    p.original_cluster = cluster;
    p.flipped_cluster = to;
    p.original_score = rounded.original_scores.at(id);
    p.flipped_score = rounded.flipped_scores.at(id);
    p.original_xy = cf.original_coords.at(id);
    p.flipped_xy = cf.flipped_coords.at(id);
    a.points.push_back(p);
  }

  for (const auto& [index, members] : original_members) {
    a.original_clusters.push_back(Summarize(
        index, members, original_sum[index] / static_cast<double>(members.size())));
  }
  for (const auto& [index, members] : flipped_members) {
    a.flipped_clusters.push_back(
        Summarize(index, members, flipped_sum[index] / static_cast<double>(members.size())));
  }

  a.paths = PathScores(rounded.original_assignments, rounded.flipped_assignments,
                       rounded.original_scores, rounded.flipped_scores, rounded.original_genders);

  const BiasSummary bias = SummarizeBias(rounded);
  a.bias.clusters = bias.clusters;
  a.bias.mean_abs_delta = bias.mean_abs_delta;
  a.bias.mean_delta = bias.mean_delta;
  a.bias.mean_delta_male = bias.mean_delta_male;
  a.bias.mean_delta_female = bias.mean_delta_female;

  const auto violations = ValidateArtifact(a);
  if (!violations.empty()) {
    std::string message = fmt::format("{} invariant(s) failed:", violations.size());
    for (const auto& v : violations) message += "\n  - " + v;
    throw Error(ErrorCode::kConsistencyViolation, message);
  }
  return a;
}

std::vector<std::string> ValidateArtifact(const AnalysisArtifact& a) {
  std::vector<std::string> errors;
  auto fail = [&errors](std::string message) { errors.push_back(std::move(message)); };

  if (a.schema_version != kArtifactSchemaVersion) {
    fail(fmt::format("schema_version {} != {}", a.schema_version, kArtifactSchemaVersion));
  }
  if (!(a.model.test_accuracy >= 0.0 && a.model.test_accuracy <= 1.0)) {
    fail("model.test_accuracy outside [0, 1]");
  }

  // Recompute every aggregate from the per-point records.
  struct Agg {
    std::size_t size = 0, male = 0, female = 0;
    double score_sum = 0.0;
  };
  std::map<std::size_t, Agg> original, flipped;
  std::map<std::pair<std::size_t, std::size_t>, PathScore> paths;
  GenderCounts total_gender;
  std::map<std::size_t, double> member_flipped_sum;  // flipped scores by original cluster
  double abs_delta = 0.0, signed_delta = 0.0, male_delta = 0.0, female_delta = 0.0;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const PointRecord& p = a.points[i];
    if (i > 0 && !(a.points[i - 1].row_id < p.row_id)) {
      fail(fmt::format("points not strictly ordered by row_id at position {}", i));
    }
    for (double s : {p.original_score, p.flipped_score}) {
      if (!(s >= 0.0 && s <= 100.0)) fail(fmt::format("row {}: score {} outside [0, 100]", p.row_id, s));
    }
    for (double c : {p.original_xy[0], p.original_xy[1], p.flipped_xy[0], p.flipped_xy[1]}) {
      if (!std::isfinite(c)) fail(fmt::format("row {}: non-finite coordinate", p.row_id));
    }
    ++(p.gender == Gender::kMale ? total_gender.male : total_gender.female);
    const double delta = p.flipped_score - p.original_score;
    member_flipped_sum[p.original_cluster] += p.flipped_score;
    abs_delta += std::abs(delta);
    signed_delta += delta;
    (p.gender == Gender::kMale ? male_delta : female_delta) += delta;
    Agg& o = original[p.original_cluster];
    ++o.size;
    ++(p.gender == Gender::kMale ? o.male : o.female);
    o.score_sum += p.original_score;
    Agg& f = flipped[p.flipped_cluster];
    ++f.size;
    ++(p.flipped_gender == Gender::kMale ? f.male : f.female);
    f.score_sum += p.flipped_score;
    PathScore& path = paths[{p.original_cluster, p.flipped_cluster}];
    ++path.count;
    ++(p.gender == Gender::kMale ? path.male : path.female);
    path.avg_original_score += p.original_score;
    path.avg_flipped_score += p.flipped_score;
  }

  if (a.dataset.total != a.points.size()) {
    fail(fmt::format("dataset.total {} != {} points", a.dataset.total, a.points.size()));
  }
  if (a.dataset.gender_counts != total_gender) {
    fail("dataset.gender_counts disagree with the per-point genders");
  }
  if (a.dataset.train_size + a.dataset.test_size != 0 &&
      a.dataset.train_size + a.dataset.test_size != a.dataset.total) {
    fail("dataset.train_size + dataset.test_size != dataset.total");
  }

  auto check_clusters = [&](const std::vector<ClusterSummary>& list, std::map<std::size_t, Agg>& agg,
                            std::string_view which) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const ClusterSummary& c = list[i];
      if (i > 0 && !(list[i - 1].index < c.index)) {
        fail(fmt::format("{} clusters not strictly ordered by index", which));
      }
      if (c.size == 0) fail(fmt::format("{} cluster {} is empty", which, c.index));
      if (c.size != c.gender_counts.male + c.gender_counts.female) {
        fail(fmt::format("{} cluster {}: size != male + female", which, c.index));
      }
      if (c.y_anchor != c.avg_score) {
        fail(fmt::format("{} cluster {}: y_anchor != avg_score", which, c.index));
      }
      if (c.description.empty()) fail(fmt::format("{} cluster {}: empty description", which, c.index));
      const auto it = agg.find(c.index);
      if (it == agg.end()) {
        fail(fmt::format("{} cluster {} has no points", which, c.index));
        continue;
      }
      const Agg& g = it->second;
      if (g.size != c.size || g.male != c.gender_counts.male || g.female != c.gender_counts.female) {
        fail(fmt::format("{} cluster {}: size/gender counts disagree with points", which, c.index));
      }
      if (g.size > 0 && !Close(g.score_sum / static_cast<double>(g.size), c.avg_score)) {
        fail(fmt::format("{} cluster {}: avg_score disagrees with points", which, c.index));
      }
      agg.erase(it);
    }
    for (const auto& [index, g] : agg) {
      fail(fmt::format("points reference {} cluster {} which is not listed", which, index));
    }
  };
  std::map<std::size_t, std::size_t> original_sizes, flipped_sizes;
  for (const auto& c : a.original_clusters) original_sizes[c.index] = c.size;
  for (const auto& c : a.flipped_clusters) flipped_sizes[c.index] = c.size;
  check_clusters(a.original_clusters, original, "original");
  check_clusters(a.flipped_clusters, flipped, "flipped");

  std::map<std::size_t, std::size_t> out_counts, in_counts;
  for (std::size_t i = 0; i < a.paths.size(); ++i) {
    const PathScore& p = a.paths[i];
    if (i > 0) {
      const PathScore& q = a.paths[i - 1];
      const bool ordered =
          q.from_cluster < p.from_cluster ||
          (q.from_cluster == p.from_cluster &&
           (q.count > p.count || (q.count == p.count && q.to_cluster < p.to_cluster)));
      if (!ordered) fail(fmt::format("paths not in canonical order at position {}", i));
    }
    if (p.count == 0) fail(fmt::format("path {}->{} has count 0", p.from_cluster, p.to_cluster));
    if (p.count != p.male + p.female) {
      fail(fmt::format("path {}->{}: count != male + female", p.from_cluster, p.to_cluster));
    }
    if (!original_sizes.contains(p.from_cluster)) {
      fail(fmt::format("path from unknown original cluster {}", p.from_cluster));
    }
    if (!flipped_sizes.contains(p.to_cluster)) {
      fail(fmt::format("path to unknown flipped cluster {}", p.to_cluster));
    }
    out_counts[p.from_cluster] += p.count;
    in_counts[p.to_cluster] += p.count;
    const auto it = paths.find({p.from_cluster, p.to_cluster});
    if (it == paths.end()) {
      fail(fmt::format("path {}->{} has no points", p.from_cluster, p.to_cluster));
      continue;
    }
    const PathScore& g = it->second;
    const double n = static_cast<double>(g.count);
    if (g.count != p.count || g.male != p.male || g.female != p.female ||
        !Close(g.avg_original_score / n, p.avg_original_score) ||
        !Close(g.avg_flipped_score / n, p.avg_flipped_score)) {
      fail(fmt::format("path {}->{} disagrees with points", p.from_cluster, p.to_cluster));
    }
    paths.erase(it);
  }
  for (const auto& [key, g] : paths) {
    fail(fmt::format("points move {}->{} but no path is listed", key.first, key.second));
  }
  for (const auto& [index, size] : original_sizes) {
    if (out_counts[index] != size) {
      fail(fmt::format("paths out of original cluster {} sum to {}, cluster size {}", index,
                       out_counts[index], size));
    }
  }
  for (const auto& [index, size] : flipped_sizes) {
    if (in_counts[index] != size) {
      fail(fmt::format("paths into flipped cluster {} sum to {}, cluster size {}", index,
                       in_counts[index], size));
    }
  }

  if (a.bias.clusters.size() != a.original_clusters.size()) {
    fail("bias block does not cover every original cluster");
  } else {
    for (std::size_t i = 0; i < a.bias.clusters.size(); ++i) {
      const ClusterDelta& d = a.bias.clusters[i];
      const ClusterSummary& c = a.original_clusters[i];
      if (d.cluster != c.index || d.size != c.size || !Close(d.avg_original_score, c.avg_score) ||
          !Close(d.delta, d.avg_flipped_score - d.avg_original_score) ||
          !Close(d.avg_flipped_score,
                 member_flipped_sum[c.index] / static_cast<double>(std::max<std::size_t>(c.size, 1)))) {
        fail(fmt::format("bias entry for cluster {} disagrees with cluster summary", c.index));
      }
    }
  }
  if (!a.points.empty()) {
    const double n = static_cast<double>(a.points.size());
    auto mean = [](double sum, std::size_t count) {
      return count ? sum / static_cast<double>(count) : 0.0;
    };
    if (!Close(a.bias.mean_abs_delta, abs_delta / n) || !Close(a.bias.mean_delta, signed_delta / n) ||
        !Close(a.bias.mean_delta_male, mean(male_delta, total_gender.male)) ||
        !Close(a.bias.mean_delta_female, mean(female_delta, total_gender.female))) {
      fail("global bias figures disagree with the per-point scores");
    }
  }
  return errors;
}

json ToJson(const ClusterSummary& c) {
  return {{"index", c.index},
          {"display_name", c.display_name},
          {"color", c.color},
          {"size", c.size},
          {"gender_counts", GenderCountsJson(c.gender_counts)},
          {"avg_score", c.avg_score},
          {"description", c.description},
          {"y_anchor", c.y_anchor}};
}

json ToJson(const PathScore& p) {
  return {{"from_cluster", p.from_cluster},
          {"to_cluster", p.to_cluster},
          {"count", p.count},
          {"count_by_original_gender", {{"male", p.male}, {"female", p.female}}},
          {"avg_original_score", p.avg_original_score},
          {"avg_flipped_score", p.avg_flipped_score}};
}

json ToJson(const PointRecord& p) {
  return {{"row_id", p.row_id},
          {"gender", GenderName(p.gender)},
          {"flipped_gender", GenderName(p.flipped_gender)},
          {"original_cluster", p.original_cluster},
          {"flipped_cluster", p.flipped_cluster},
          {"original_score", p.original_score},
          {"flipped_score", p.flipped_score},
          {"original_xy", p.original_xy},
          {"flipped_xy", p.flipped_xy}};
}

json SummaryJson(const AnalysisArtifact& a) {
  return {{"dataset",
           {{"total", a.dataset.total},
            {"gender_counts", GenderCountsJson(a.dataset.gender_counts)},
            {"train_size", a.dataset.train_size},
            {"test_size", a.dataset.test_size}}},
          {"model",
           {{"layout",
             {{"input_size", a.model.input_size},
              {"hidden_sizes", a.model.hidden_sizes},
              {"output_size", a.model.output_size}}},
            {"test_accuracy", a.model.test_accuracy},
            {"best_epoch", a.model.best_epoch}}}};
}

json ToJson(const AnalysisArtifact& a) {
  json j;
  j["schema_version"] = a.schema_version;
  j["summary"] = SummaryJson(a);
  j["config"] = {{"data_seed", a.config.data_seed},
                 {"train_seed", a.config.train_seed},
                 {"flip_feature", a.config.flip_feature},
                 {"tsne",
                  {{"perplexity", a.config.perplexity},
                   {"iterations", a.config.tsne_iterations},
                   {"seed", a.config.tsne_seed}}},
                 {"cluster",
                  {{"k", a.config.k},
                   {"restarts", a.config.restarts},
                   {"seed", a.config.cluster_seed}}}};
  j["original_clusters"] = json::array();
  for (const auto& c : a.original_clusters) j["original_clusters"].push_back(ToJson(c));
  j["flipped_clusters"] = json::array();
  for (const auto& c : a.flipped_clusters) j["flipped_clusters"].push_back(ToJson(c));
  j["paths"] = json::array();
  for (const auto& p : a.paths) j["paths"].push_back(ToJson(p));
  j["points"] = json::array();
  for (const auto& p : a.points) j["points"].push_back(ToJson(p));
  json bias_clusters = json::array();
  for (const auto& c : a.bias.clusters) bias_clusters.push_back(ClusterDeltaJson(c));
  j["bias_summary"] = {{"clusters", bias_clusters},
                       {"mean_abs_delta", a.bias.mean_abs_delta},
                       {"mean_delta", a.bias.mean_delta},
                       {"mean_delta_male", a.bias.mean_delta_male},
                       {"mean_delta_female", a.bias.mean_delta_female}};
  return j;
}

AnalysisArtifact ArtifactFromJson(const json& j) {
  try {
    AnalysisArtifact a;
    a.schema_version = j.at("schema_version").get<int>();
    const json& dataset = j.at("summary").at("dataset");
    a.dataset.total = dataset.at("total").get<std::size_t>();
    a.dataset.gender_counts = GenderCountsFrom(dataset.at("gender_counts"));
    a.dataset.train_size = dataset.at("train_size").get<std::size_t>();
    a.dataset.test_size = dataset.at("test_size").get<std::size_t>();
    const json& model = j.at("summary").at("model");
    a.model.input_size = model.at("layout").at("input_size").get<std::size_t>();
    a.model.hidden_sizes = model.at("layout").at("hidden_sizes").get<std::vector<std::size_t>>();
    a.model.output_size = model.at("layout").at("output_size").get<std::size_t>();
    a.model.test_accuracy = model.at("test_accuracy").get<double>();
    a.model.best_epoch = model.at("best_epoch").get<std::size_t>();
    const json& config = j.at("config");
    a.config.data_seed = config.at("data_seed").get<std::uint64_t>();
    a.config.train_seed = config.at("train_seed").get<std::uint64_t>();
    a.config.flip_feature = config.at("flip_feature").get<std::string>();
    a.config.perplexity = config.at("tsne").at("perplexity").get<double>();
    a.config.tsne_iterations = config.at("tsne").at("iterations").get<std::size_t>();
    a.config.tsne_seed = config.at("tsne").at("seed").get<std::uint64_t>();
    a.config.k = config.at("cluster").at("k").get<std::size_t>();
    a.config.restarts = config.at("cluster").at("restarts").get<std::size_t>();
    a.config.cluster_seed = config.at("cluster").at("seed").get<std::uint64_t>();
    for (const auto& c : j.at("original_clusters")) a.original_clusters.push_back(ClusterSummaryFrom(c));
    for (const auto& c : j.at("flipped_clusters")) a.flipped_clusters.push_back(ClusterSummaryFrom(c));
    for (const auto& p : j.at("paths")) a.paths.push_back(PathFrom(p));
    for (const auto& p : j.at("points")) a.points.push_back(PointFrom(p));
    const json& bias = j.at("bias_summary");
    for (const auto& c : bias.at("clusters")) {
      a.bias.clusters.push_back({c.at("cluster").get<std::size_t>(), c.at("size").get<std::size_t>(),
                                 c.at("avg_original_score").get<double>(),
                                 c.at("avg_flipped_score").get<double>(),
                                 c.at("delta").get<double>()});
    }
    a.bias.mean_abs_delta = bias.at("mean_abs_delta").get<double>();
    a.bias.mean_delta = bias.at("mean_delta").get<double>();
    a.bias.mean_delta_male = bias.at("mean_delta_male").get<double>();
    a.bias.mean_delta_female = bias.at("mean_delta_female").get<double>();
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConsistencyViolation, fmt::format("malformed artifact: {}", e.what()));
  }
}

std::string SerializeArtifact(const AnalysisArtifact& artifact) {
  return ToJson(artifact).dump(2) + "\n";
}

void WriteArtifact(const AnalysisArtifact& artifact, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kFileNotFound, fmt::format("cannot write '{}'", path.string()));
  }
  out << SerializeArtifact(artifact);
}

AnalysisArtifact ReadArtifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, fmt::format("cannot open artifact '{}'", path.string()));
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConsistencyViolation,
                fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
  return ArtifactFromJson(j);
}

}  // namespace ceb
