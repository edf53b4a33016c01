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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ceb {

using RowId = std::size_t;

// ---------------------------------------------------------------------------
// Raw CSV table

struct RawRow {
  RowId index = 0;  // 0-based position among the data rows of the source file
  std::vector<std::optional<std::string>> cells;  // nullopt = missing cell
};

struct RawTable {
  std::vector<std::string> header;
  std::vector<RawRow> rows;

  // Position of `name` in the header, if present.
  std::optional<std::size_t> Column(std::string_view name) const;
};

// Parses CSV text with a header row. Quoted fields ("a,b", "say ""hi""") are
// supported; empty or whitespace-only cells are treated as missing. The
// columns the pipeline needs (see kRequiredColumns) must be present.
//
// MalformedRow errors name the 1-based data row number (header excluded).
RawTable ParseCsv(std::string_view text);
RawTable ReadCsvFile(const std::filesystem::path& path);

// Source columns of the loan data set that the encoder reads.
inline constexpr std::array<std::string_view, 8> kRequiredColumns = {
    "Gender",       "Education",        "Self_Employed",  "ApplicantIncome",
    "LoanAmount",   "Loan_Amount_Term", "Credit_History", "Loan_Status"};

// ---------------------------------------------------------------------------
// Typed records

enum class Gender : std::uint8_t { kMale, kFemale };
enum class Education : std::uint8_t { kGraduate, kNotGraduate };
enum class Outcome : std::uint8_t { kApproved, kRejected };

struct LoanRecord {
  RowId row_id = 0;
  Gender gender = Gender::kMale;
  Education education = Education::kGraduate;
  bool self_employed = false;
  double income = 0.0;       // applicant income per month
  bool credit_history = false;
  double loan_amount = 0.0;  // thousands
  double loan_term = 0.0;    // months
  Outcome outcome = Outcome::kApproved;

  friend bool operator==(const LoanRecord&, const LoanRecord&) = default;
};

// Drops every row with a missing cell in any column, then converts the
// remaining rows. Order is preserved and row_id is the source row index.
std::vector<LoanRecord> Clean(const RawTable& raw);

// Inverse of Clean for already-clean records: renders records back into the
// required columns, keeping row indices. Used to check idempotence.
RawTable ToRawTable(const std::vector<LoanRecord>& records);

// ---------------------------------------------------------------------------
// Encoded features

inline constexpr std::size_t kNumFeatures = 7;

// Slot order of the encoded vector.
enum Feature : std::size_t {
  kGenderSlot = 0,
  kEducationSlot = 1,
  kSelfEmployedSlot = 2,
  kIncomeSlot = 3,
  kCreditHistorySlot = 4,
  kLoanAmountSlot = 5,
  kLoanTermSlot = 6,
};

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "gender", "education", "self_employed", "income",
    "credit_history", "loan_amount", "loan_term"};

inline constexpr std::array<std::size_t, 3> kContinuousSlots = {
    kIncomeSlot, kLoanAmountSlot, kLoanTermSlot};

bool IsBinarySlot(std::size_t slot);
std::optional<std::size_t> FeatureSlot(std::string_view name);

struct FeatureVector {
  RowId row_id = 0;
  std::array<double, kNumFeatures> values{};
  double label = 0.0;  // 1.0 = approved

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Per continuous slot (income, loan amount, loan term) mean and population
// standard deviation.
struct Standardization {
  std::array<double, 3> mean{};
  std::array<double, 3> stddev{1.0, 1.0, 1.0};

  friend bool operator==(const Standardization&, const Standardization&) = default;
};

// Male/Graduate/self-employed/approved -> 1, continuous slots left raw.
FeatureVector Encode(const LoanRecord& record);
std::vector<FeatureVector> Encode(const std::vector<LoanRecord>& records);

// Throws DegenerateFeature when a continuous slot has zero spread.
Standardization FitStandardization(const std::vector<FeatureVector>& raw);
std::vector<FeatureVector> Standardize(std::vector<FeatureVector> raw,
                                       const Standardization& stats);

struct EncodedSet {
  std::vector<FeatureVector> vectors;
  Standardization standardization;
};

// Encodes and z-scores. With `stats` the given statistics are applied (test
// path); without, they are fitted on `records` (train path).
EncodedSet EncodeAndStandardize(const std::vector<LoanRecord>& records,
                                const std::optional<Standardization>& stats = std::nullopt);

// ---------------------------------------------------------------------------
// Train/test split

struct DatasetSplit {
  std::vector<FeatureVector> train;  // standardized
  std::vector<FeatureVector> test;   // standardized with train statistics
  Standardization standardization;
  std::uint64_t seed = 0;
};

// Seeded Fisher-Yates shuffle of the (unstandardized) vectors, prefix of
// floor(2n/3) becomes train. Standardization is fitted on train only and
// applied to both partitions. Requires n >= 3.
DatasetSplit Split(const std::vector<FeatureVector>& raw, std::uint64_t seed);

}  // namespace ceb
