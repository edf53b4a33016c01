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

#include "ceb/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ceb/error.hpp"
#include "ceb/random.hpp"

namespace ceb {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits one logical CSV record starting at `pos`. Advances `pos` past the
// record terminator. Quoted fields may contain commas, quotes and newlines.
std::vector<std::string> ReadRecord(std::string_view text, std::size_t& pos) {
  std::vector<std::string> cells;
  std::string cell;
  bool in_quotes = false;
  while (pos < text.size()) {
    const char c = text[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          cell.push_back('"');
          ++pos;
        } else {
          in_quotes = false;
        }
      } else {
        cell.push_back(c);
      }
      ++pos;
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      ++pos;
      break;
    } else if (c != '\r') {
      cell.push_back(c);
    }
    ++pos;
  }
  cells.push_back(std::move(cell));
  return cells;
}

bool IsBlankLine(std::string_view text, std::size_t pos) {
  while (pos < text.size() && (text[pos] == '\r' || text[pos] == ' ')) ++pos;
  return pos >= text.size() || text[pos] == '\n';
}

const std::string& Cell(const RawRow& row, std::size_t column) {
  return *row.cells[column];
}

double ParseNumber(const std::string& text, RowId row, std::string_view column) {
  const std::string_view s = Trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidNumber,
                fmt::format("row {} column {}: '{}' is not a number", row, column, text));
  }
  return value;
}

[[noreturn]] void UnknownCategory(const std::string& value, RowId row, std::string_view column) {
  throw Error(ErrorCode::kUnknownCategory,
              fmt::format("row {} column {}: unexpected value '{}'", row, column, value));
}

std::string FormatNumber(double v) { return fmt::format("{}", v); }

}  // namespace

std::optional<std::size_t> RawTable::Column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

RawTable ParseCsv(std::string_view text) {
  // Byte order mark.
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  RawTable table;
  std::size_t pos = 0;
  if (text.empty()) {
    throw Error(ErrorCode::kHeaderMismatch, "input is empty, expected a header row");
  }
  for (auto& name : ReadRecord(text, pos)) table.header.emplace_back(Trim(name));
  for (const auto required : kRequiredColumns) {
    if (!table.Column(required)) {
      throw Error(ErrorCode::kHeaderMismatch,
                  fmt::format("required column '{}' is absent", required));
    }
  }

  RowId index = 0;
  while (pos < text.size()) {
    if (IsBlankLine(text, pos)) {
      const auto nl = text.find('\n', pos);
      pos = nl == std::string_view::npos ? text.size() : nl + 1;
      continue;
    }
    auto cells = ReadRecord(text, pos);
    if (cells.size() != table.header.size()) {
      throw Error(ErrorCode::kMalformedRow,
                  fmt::format("row {} has {} cells, header has {}", index + 1, cells.size(),
                              table.header.size()));
    }
    RawRow row{index, {}};
    row.cells.reserve(cells.size());
    for (auto& cell : cells) {
      const auto trimmed = Trim(cell);
      if (trimmed.empty()) {
        row.cells.emplace_back(std::nullopt);
      } else {
        row.cells.emplace_back(std::string(trimmed));
      }
    }
    table.rows.push_back(std::move(row));
    ++index;
  }
  return table;
}

RawTable ReadCsvFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, fmt::format("cannot open '{}'", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str());
}

std::vector<LoanRecord> Clean(const RawTable& raw) {
  std::array<std::size_t, kRequiredColumns.size()> col{};
  for (std::size_t i = 0; i < kRequiredColumns.size(); ++i) {
    const auto c = raw.Column(kRequiredColumns[i]);
    if (!c) {
      throw Error(ErrorCode::kHeaderMismatch,
                  fmt::format("required column '{}' is absent", kRequiredColumns[i]));
    }
    col[i] = *c;
  }
  const auto [gender_col, education_col, self_employed_col, income_col, amount_col, term_col,
              credit_col, status_col] = col;

  std::vector<LoanRecord> records;
  for (const auto& row : raw.rows) {
    if (std::any_of(row.cells.begin(), row.cells.end(),
                    [](const auto& cell) { return !cell.has_value(); })) {
      continue;
    }
    LoanRecord r;
    r.row_id = row.index;

    const auto& gender = Cell(row, gender_col);
    if (gender == "Male") r.gender = Gender::kMale;
    else if (gender == "Female") r.gender = Gender::kFemale;
    else UnknownCategory(gender, row.index, "Gender");

    const auto& education = Cell(row, education_col);
    if (education == "Graduate") r.education = Education::kGraduate;
    else if (education == "Not Graduate") r.education = Education::kNotGraduate;
    else UnknownCategory(education, row.index, "Education");

    const auto& self_employed = Cell(row, self_employed_col);
    if (self_employed == "Yes") r.self_employed = true;
    else if (self_employed == "No") r.self_employed = false;
    else UnknownCategory(self_employed, row.index, "Self_Employed");

    const auto& credit = Cell(row, credit_col);
    const double credit_value = ParseNumber(credit, row.index, "Credit_History");
    if (credit_value == 1.0) r.credit_history = true;
    else if (credit_value == 0.0) r.credit_history = false;
    else UnknownCategory(credit, row.index, "Credit_History");

    const auto& status = Cell(row, status_col);
    if (status == "Y") r.outcome = Outcome::kApproved;
    else if (status == "N") r.outcome = Outcome::kRejected;
    else UnknownCategory(status, row.index, "Loan_Status");

    r.income = ParseNumber(Cell(row, income_col), row.index, "ApplicantIncome");
    r.loan_amount = ParseNumber(Cell(row, amount_col), row.index, "LoanAmount");
    r.loan_term = ParseNumber(Cell(row, term_col), row.index, "Loan_Amount_Term");
    if (r.income < 0.0 || r.loan_amount < 0.0 || r.loan_term <= 0.0) {
      throw Error(ErrorCode::kInvalidNumber,
                  fmt::format("row {}: income and loan amount must be >= 0, term > 0", row.index));
    }
    records.push_back(r);
  }
  return records;
}

RawTable ToRawTable(const std::vector<LoanRecord>& records) {
  RawTable table;
  table.header.assign(kRequiredColumns.begin(), kRequiredColumns.end());
  for (const auto& r : records) {
    RawRow row{r.row_id, {}};
    row.cells = {
        std::string(r.gender == Gender::kMale ? "Male" : "Female"),
        std::string(r.education == Education::kGraduate ? "Graduate" : "Not Graduate"),
        std::string(r.self_employed ? "Yes" : "No"),
        FormatNumber(r.income),
        FormatNumber(r.loan_amount),
        FormatNumber(r.loan_term),
        std::string(r.credit_history ? "1.0" : "0.0"),
        std::string(r.outcome == Outcome::kApproved ? "Y" : "N"),
    };
    table.rows.push_back(std::move(row));
  }
  return table;
}

bool IsBinarySlot(std::size_t slot) {
  return slot == kGenderSlot || slot == kEducationSlot || slot == kSelfEmployedSlot ||
         slot == kCreditHistorySlot;
}

std::optional<std::size_t> FeatureSlot(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i) {
    if (kFeatureNames[i] == name) return i;
  }
  return std::nullopt;
}

FeatureVector Encode(const LoanRecord& r) {
  FeatureVector v;
  v.row_id = r.row_id;
  v.values[kGenderSlot] = r.gender == Gender::kMale ? 1.0 : 0.0;
  v.values[kEducationSlot] = r.education == Education::kGraduate ? 1.0 : 0.0;
  v.values[kSelfEmployedSlot] = r.self_employed ? 1.0 : 0.0;
  v.values[kIncomeSlot] = r.income;
  v.values[kCreditHistorySlot] = r.credit_history ? 1.0 : 0.0;
  v.values[kLoanAmountSlot] = r.loan_amount;
  v.values[kLoanTermSlot] = r.loan_term;
  v.label = r.outcome == Outcome::kApproved ? 1.0 : 0.0;
  return v;
}

std::vector<FeatureVector> Encode(const std::vector<LoanRecord>& records) {
  std::vector<FeatureVector> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(Encode(r));
  return out;
}

Standardization FitStandardization(const std::vector<FeatureVector>& raw) {
  if (raw.empty()) throw Error(ErrorCode::kEmptySet, "cannot fit standardization on 0 rows");
  Standardization stats;
  const double n = static_cast<double>(raw.size());
  for (std::size_t k = 0; k < kContinuousSlots.size(); ++k) {
    const std::size_t slot = kContinuousSlots[k];
    double sum = 0.0;
    for (const auto& v : raw) sum += v.values[slot];
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& v : raw) sq += (v.values[slot] - mean) * (v.values[slot] - mean);
    const double stddev = std::sqrt(sq / n);
    if (!(stddev > 0.0)) {
      throw Error(ErrorCode::kDegenerateFeature,
                  fmt::format("feature '{}' has zero standard deviation", kFeatureNames[slot]));
    }
    stats.mean[k] = mean;
    stats.stddev[k] = stddev;
  }
  return stats;
}

std::vector<FeatureVector> Standardize(std::vector<FeatureVector> raw,
                                       const Standardization& stats) {
  for (auto& v : raw) {
    for (std::size_t k = 0; k < kContinuousSlots.size(); ++k) {
      const std::size_t slot = kContinuousSlots[k];
      v.values[slot] = (v.values[slot] - stats.mean[k]) / stats.stddev[k];
    }
  }
  return raw;
}

EncodedSet EncodeAndStandardize(const std::vector<LoanRecord>& records,
                                const std::optional<Standardization>& stats) {
  auto raw = Encode(records);
  const Standardization used = stats ? *stats : FitStandardization(raw);
  return {Standardize(std::move(raw), used), used};
}

DatasetSplit Split(const std::vector<FeatureVector>& raw, std::uint64_t seed) {
  const std::size_t n = raw.size();
  if (n < 3) {
    throw Error(ErrorCode::kTooFewRows, fmt::format("need at least 3 rows to split, got {}", n));
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(order);

  const std::size_t n_train = (2 * n) / 3;
  std::vector<FeatureVector> train, test;
  train.reserve(n_train);
  test.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_train ? train : test).push_back(raw[order[i]]);
  }

  DatasetSplit split;
  split.seed = seed;
  split.standardization = FitStandardization(train);
  split.train = Standardize(std::move(train), split.standardization);
  split.test = Standardize(std::move(test), split.standardization);
  return split;
}

}  // namespace ceb
