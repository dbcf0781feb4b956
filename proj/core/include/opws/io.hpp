// Copyright 2026 The opws Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serialization.
//
//   operators, supports, covers, identifiers, reports: JSON
//   signals:     CSV rows "t,re,im", or raw little-endian float64 pairs
//                (re, im) with a JSON sidecar {"t0", "dt", "n"}
//   2-D arrays:  raw little-endian float64 pairs in row-major order with a
//                JSON sidecar {"t0", "dt0", "t1", "dt1", "dims"}
//
// Complex scalars are JSON pairs [re, im]. Rational coordinates are written
// as strings "p/q" and accepted as strings or numbers.
//
// Readers reject unknown keys with SchemaError.

#ifndef OPWS_IO_HPP_
#define OPWS_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "opws/gabor.hpp"
#include "opws/geometry.hpp"
#include "opws/identify.hpp"
#include "opws/model.hpp"
#include "opws/transforms.hpp"

namespace opws {

class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using nlohmann::json;

/// Throws SchemaError if `j` is not an object or has keys outside `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where);

json to_json(cplx z);
cplx complex_from_json(const json& j);
json to_json(std::span<const cplx> v);
CVector cvector_from_json(const json& j);

json to_json(const Rational& r);
Rational rational_from_json(const json& j);

json to_json(const SupportSet& s);
SupportSet support_from_json(const json& j);

json to_json(const Profile& p);
Profile profile_from_json(const json& j);

json to_json(const GroundTruthOperator& op);
GroundTruthOperator operator_from_json(const json& j);

json to_json(const DeltaTrain& g);
DeltaTrain train_from_json(const json& j);

json to_json(const CellCover& cover);
CellCover cover_from_json(const json& j);

json to_json(const CellPattern& p);
CellPattern pattern_from_json(const json& j);

json to_json(const GlpCertificate& cert);
json to_json(const GaborIdentifier& id);
/// Accepts {"L": .., "c": [...]} (certificate optional) or a bare list.
CVector identifier_from_json(const json& j);

json to_json(const ContentResult& r);
json to_json(const SupportNormalization& nz);

/// Summary JSON; array payloads are referenced by file name when
/// `array_stem` is non-empty.
json to_json(const ReconstructionReport& r, const std::string& array_stem = "");

std::string signal_to_csv(const SampledSignal& s);
/// One row per entry: axis0,axis1,re,im (row-major).
std::string array_to_csv(const GriddedArray& a);
SampledSignal signal_from_csv(const std::string& text);

/// Writes <stem>.bin and <stem>.json.
void write_signal_binary(const std::filesystem::path& stem, const SampledSignal& s);
SampledSignal read_signal_binary(const std::filesystem::path& stem);
void write_array_binary(const std::filesystem::path& stem, const GriddedArray& a);
GriddedArray read_array_binary(const std::filesystem::path& stem);

/// Writes through a temporary file in the same directory and renames it
/// into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);
json read_json_file(const std::filesystem::path& path);

/// Pretty-printed JSON with a trailing newline; numbers use shortest
/// round-trip formatting.
std::string dump(const json& j);

}  // namespace opws

#endif  // OPWS_IO_HPP_
