#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mechindep/matrix.hpp"
#include "mechindep/tensor.hpp"

namespace mechindep {

using Json = nlohmann::ordered_json;

enum class Criterion {
    D,
    D_irreducible,
    M,
    M_irreducible,
    S,
    S_pairwise,
    S_irreducible,
    H2,
    H3,
    H_irreducible,
    O,
    separability,
    support_union,
    l0_nonincrease,
    hierarchy,
    assignment,
    contrast,
    prop_a10,
    topology,
};

std::string_view criterion_name(Criterion c);
std::optional<Criterion> criterion_from_name(std::string_view name);

/// Verdict of one checker. A failing certificate always carries a witness;
/// checks that are only complete within a search scope record it in notes.
struct Certificate {
    Criterion criterion = Criterion::D;
    bool holds = false;
    Json witness = Json::object();
    std::vector<std::string> notes;
    std::string inputs_digest;

    /// Field order: criterion, holds, witness, notes, inputsDigest.
    Json to_json() const;
    static Certificate from_json(const Json& j);

    bool operator==(const Certificate& other) const;
};

/// FNV-1a 64-bit hash of the shape and the IEEE-754 bytes of the entries,
/// rendered as 16 lowercase hex digits.
std::string digest(const Matrix& m);
std::string digest(const DerivativeTensor& t);
std::string digest_bytes(std::string_view bytes);

/// 1-based index lists for witnesses.
Json to_json(const SupportMask& mask);
Json to_json(const Matrix& m);

}  // namespace mechindep
