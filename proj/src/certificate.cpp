#include "mechindep/certificate.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <utility>

#include "mechindep/errors.hpp"

namespace mechindep {

namespace {

constexpr std::array<std::pair<Criterion, std::string_view>, 19> kNames{{
    {Criterion::D, "D"},
    {Criterion::D_irreducible, "D-irreducible"},
    {Criterion::M, "M"},
    {Criterion::M_irreducible, "M-irreducible"},
    {Criterion::S, "S"},
    {Criterion::S_pairwise, "S-pairwise"},
    {Criterion::S_irreducible, "S-irreducible"},
    {Criterion::H2, "H2"},
    {Criterion::H3, "H3"},
    {Criterion::H_irreducible, "H-irreducible"},
    {Criterion::O, "O"},
    {Criterion::separability, "separability"},
    {Criterion::support_union, "supportUnion"},
    {Criterion::l0_nonincrease, "l0NonIncrease"},
    {Criterion::hierarchy, "hierarchy"},
    {Criterion::assignment, "assignment"},
    {Criterion::contrast, "contrast"},
    {Criterion::prop_a10, "blockCount"},
    {Criterion::topology, "topology"},
}};

class Fnv1a {
public:
    void add(const void* data, std::size_t size) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t k = 0; k < size; ++k) {
            hash_ ^= p[k];
            hash_ *= 0x100000001b3ULL;
        }
    }
    void add_u64(std::uint64_t v) {
        unsigned char bytes[8];
        for (int k = 0; k < 8; ++k) bytes[k] = static_cast<unsigned char>(v >> (8 * k));
        add(bytes, 8);
    }
    void add_double(double d) { add_u64(std::bit_cast<std::uint64_t>(d)); }

    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
        return buf;
    }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string_view criterion_name(Criterion c) {
    for (const auto& [k, name] : kNames)
        if (k == c) return name;
    return "unknown";
}

std::optional<Criterion> criterion_from_name(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    return std::nullopt;
}

Json Certificate::to_json() const {
    Json j;
    j["criterion"] = std::string(criterion_name(criterion));
    j["holds"] = holds;
    j["witness"] = witness;
    j["notes"] = notes;
    j["inputsDigest"] = inputs_digest;
    return j;
}

Certificate Certificate::from_json(const Json& j) {
    Certificate c;
    const auto name = j.at("criterion").get<std::string>();
    const auto criterion = criterion_from_name(name);
    if (!criterion) throw InvalidInput("unknown criterion '" + name + "'");
    c.criterion = *criterion;
    c.holds = j.at("holds").get<bool>();
    c.witness = j.at("witness");
    c.notes = j.at("notes").get<std::vector<std::string>>();
    c.inputs_digest = j.at("inputsDigest").get<std::string>();
    return c;
}

bool Certificate::operator==(const Certificate& other) const {
    return criterion == other.criterion && holds == other.holds && witness == other.witness &&
           notes == other.notes && inputs_digest == other.inputs_digest;
}

std::string digest(const Matrix& m) {
    Fnv1a h;
    h.add_u64(m.rows());
    h.add_u64(m.cols());
    for (double e : m.data()) h.add_double(e);
    return h.hex();
}

std::string digest(const DerivativeTensor& t) {
    Fnv1a h;
    h.add_u64(t.order());
    h.add_u64(t.outputs());
    h.add_u64(t.inputs());
    for (double e : t.entries()) h.add_double(e);
    return h.hex();
}

std::string digest_bytes(std::string_view bytes) {
    Fnv1a h;
    h.add(bytes.data(), bytes.size());
    return h.hex();
}

Json to_json(const SupportMask& mask) { return mask.members(); }

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<double> row(m.row(r).begin(), m.row(r).end());
        for (double& v : row) v += 0.0;  // -0.0 prints as 0.0
        rows.push_back(row);
    }
    return rows;
}

}  // namespace mechindep
