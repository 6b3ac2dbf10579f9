/*
   Copyright 2026 The twistctl Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef TWIST_ERROR_HPP
#define TWIST_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace twist {

enum class Errc {
    // algebra-core
    NotIrreducible,
    NotAnAutomorphism,
    NotClosed,
    NotSeparableModP,
    BadReduction,
    Ramified,
    NonAbelianAmbiguity,
    IndexOutOfRange,
    // characters
    NotCoprime,
    MissingValue,
    IncompatibleSupports,
    NotRootOfUnity,
    Ambiguous,
    // eigensystem
    SchemaError,
    CoefficientDimensionMismatch,
    DuplicatePlace,
    NotDivisible,
    NontrivialNebentypus,
    NotNormalized,
    // twist-engine
    InsufficientData,
    DuplicateAutomorphism,
    // forms
    CocycleViolation,
    NotInvertible,
    BudgetExceeded,
    // lmfdb-client
    NotFound,
    NetworkError,
    SchemaDrift,
    NotGalois,
    MissingCoefficients,
    // generic
    InvalidArgument,
};

constexpr std::string_view errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::NotIrreducible: return "NotIrreducible";
        case Errc::NotAnAutomorphism: return "NotAnAutomorphism";
        case Errc::NotClosed: return "NotClosed";
        case Errc::NotSeparableModP: return "NotSeparableModP";
        case Errc::BadReduction: return "BadReduction";
        case Errc::Ramified: return "Ramified";
        case Errc::NonAbelianAmbiguity: return "NonAbelianAmbiguity";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::NotCoprime: return "NotCoprime";
        case Errc::MissingValue: return "MissingValue";
        case Errc::IncompatibleSupports: return "IncompatibleSupports";
        case Errc::NotRootOfUnity: return "NotRootOfUnity";
        case Errc::Ambiguous: return "Ambiguous";
        case Errc::SchemaError: return "SchemaError";
        case Errc::CoefficientDimensionMismatch: return "CoefficientDimensionMismatch";
        case Errc::DuplicatePlace: return "DuplicatePlace";
        case Errc::NotDivisible: return "NotDivisible";
        case Errc::NontrivialNebentypus: return "NontrivialNebentypus";
        case Errc::NotNormalized: return "NotNormalized";
        case Errc::InsufficientData: return "InsufficientData";
        case Errc::DuplicateAutomorphism: return "DuplicateAutomorphism";
        case Errc::CocycleViolation: return "CocycleViolation";
        case Errc::NotInvertible: return "NotInvertible";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::NotFound: return "NotFound";
        case Errc::NetworkError: return "NetworkError";
        case Errc::SchemaDrift: return "SchemaDrift";
        case Errc::NotGalois: return "NotGalois";
        case Errc::MissingCoefficients: return "MissingCoefficients";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Domain error carrying the module error name; what() is "<Name>: <detail>".
class Error : public std::runtime_error {
   public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    Errc code() const noexcept { return code_; }
    std::string_view name() const noexcept { return errc_name(code_); }

   private:
    Errc code_;
};

}  // namespace twist

#endif
