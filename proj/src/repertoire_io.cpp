#include "swarmft/repertoire_io.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace swarmft {

namespace {
constexpr const char* kFormat = "swarmft-labelled-repertoire";
constexpr int kVersion = 1;
}  // namespace

std::string repertoire_to_json(const LabelledRepertoire& rep, std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["kind"] = std::string(to_string(rep.kind));
    j["dims"] = dims_of(rep.kind);
    j["length"] = kSignatureLength;
    j["count"] = rep.members.size();
    j["seed"] = seed;
    auto members = nlohmann::ordered_json::array();
    for (const auto& s : rep.members) {
        auto rows = nlohmann::ordered_json::array();
        for (std::size_t n = 0; n < s.length(); ++n) {
            auto row = nlohmann::ordered_json::array();
            for (std::size_t d = 0; d < s.dims(); ++d) row.push_back(s.at(n, d));
            rows.push_back(std::move(row));
        }
        members.push_back(std::move(rows));
    }
    j["members"] = std::move(members);
    return j.dump(1) + "\n";
}

LabelledRepertoire repertoire_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw RepertoireError(fmt::format("repertoire: invalid JSON: {}", e.what()));
    }
    try {
        if (j.at("format").get<std::string>() != kFormat) throw RepertoireError("repertoire: unexpected format tag");
        if (j.at("version").get<int>() != kVersion) throw RepertoireError("repertoire: unsupported version");
        LabelledRepertoire rep;
        rep.kind = parse_signature_kind(j.at("kind").get<std::string>());
        const auto dims = j.at("dims").get<std::size_t>();
        const auto length = j.at("length").get<std::size_t>();
        if (dims != dims_of(rep.kind)) throw RepertoireError("repertoire: dims do not match kind");
        for (const auto& m : j.at("members")) {
            if (m.size() != length) throw RepertoireError("repertoire: member length mismatch");
            Series s(dims);
            std::vector<double> row(dims);
            for (const auto& r : m) {
                if (r.size() != dims) throw RepertoireError("repertoire: sample dims mismatch");
                for (std::size_t d = 0; d < dims; ++d) row[d] = r[d].get<double>();
                s.push(row);
            }
            rep.members.push_back(std::move(s));
        }
        if (rep.members.size() != j.at("count").get<std::size_t>()) throw RepertoireError("repertoire: count mismatch");
        return rep;
    } catch (const nlohmann::json::exception& e) {
        throw RepertoireError(fmt::format("repertoire: malformed field: {}", e.what()));
    } catch (const std::invalid_argument& e) {
        throw RepertoireError(fmt::format("repertoire: {}", e.what()));
    }
}

void save_repertoire(const std::filesystem::path& path, const LabelledRepertoire& rep, std::uint64_t seed) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RepertoireError(fmt::format("repertoire: cannot write '{}'", path.string()));
    out << repertoire_to_json(rep, seed);
    if (!out) throw RepertoireError(fmt::format("repertoire: write failed for '{}'", path.string()));
}

LabelledRepertoire load_repertoire(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RepertoireError(fmt::format("repertoire: cannot open '{}'", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return repertoire_from_json(buf.str());
    } catch (const RepertoireError& e) {
        throw RepertoireError(fmt::format("{} ({})", e.what(), path.string()));
    }
}

const LabelledRepertoire& cached_repertoire(const std::filesystem::path& path, SignatureKind kind) {
    static std::mutex mutex;
    static std::map<std::string, std::unique_ptr<LabelledRepertoire>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[path.string()];
    if (!slot) slot = std::make_unique<LabelledRepertoire>(load_repertoire(path));
    if (slot->kind != kind) {
        throw RepertoireError(fmt::format("repertoire: '{}' holds {} signatures, expected {}", path.string(),
                                          to_string(slot->kind), to_string(kind)));
    }
    return *slot;
}

}  // namespace swarmft
