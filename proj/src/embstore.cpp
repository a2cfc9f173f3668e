#include "ambigeo/embstore.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>

#include <json.hpp>

#include "ambigeo/error.hpp"

namespace ambigeo::embstore {

namespace {

// Header lengths beyond this are treated as corruption rather than allocated.
constexpr std::uint32_t kMaxHeaderBytes = 1u << 30;

void put_u32le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::string read_all(std::istream& in) {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void validate(const EmbeddingSet& set) {
    if (set.count() == 0 || set.dim() == 0) {
        throw Error(ErrorCode::Validation, "embedding set '" + set.word + "' is empty");
    }
    if (set.context_ids.size() != set.count()) {
        throw Error(ErrorCode::Validation, "context_ids length does not match row count");
    }
    std::set<std::string_view> seen;
    for (const auto& id : set.context_ids) {
        if (!seen.insert(id).second) throw Error(ErrorCode::Validation, "duplicate context_id " + id);
    }
    for (std::size_t r = 0; r < set.count(); ++r) {
        for (float v : set.row(r)) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::Validation,
                            "non-finite value in row " + std::to_string(r) + " (" + set.context_ids[r] + ")");
            }
        }
    }
}

std::size_t write_embv1(const EmbeddingSet& set, std::ostream& sink) {
    validate(set);
    nlohmann::ordered_json header;
    header["word"] = set.word;
    header["dim"] = set.dim();
    header["count"] = set.count();
    header["dtype"] = "f32le";
    header["context_ids"] = set.context_ids;
    const std::string header_text = header.dump();

    std::string bytes(kMagic);
    put_u32le(bytes, static_cast<std::uint32_t>(header_text.size()));
    bytes += header_text;
    bytes.reserve(bytes.size() + 4 * set.vectors.data().size());
    for (float v : set.vectors.data()) put_u32le(bytes, std::bit_cast<std::uint32_t>(v));

    sink.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!sink) throw Error(ErrorCode::Io, "failed writing EMBV1 stream");
    return bytes.size();
}

EmbeddingSet read_embv1(std::istream& source) {
    const std::string bytes = read_all(source);
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < kMagic.size() || std::string_view(bytes).substr(0, kMagic.size()) != kMagic) {
        throw Error(ErrorCode::Format, "bad magic (expected EMBV1)");
    }
    std::size_t pos = kMagic.size();
    if (bytes.size() < pos + 4) throw Error(ErrorCode::Truncation, "missing header length");
    const std::uint32_t header_len = get_u32le(data + pos);
    pos += 4;
    if (header_len > kMaxHeaderBytes) throw Error(ErrorCode::Format, "implausible header length");
    if (bytes.size() < pos + header_len) throw Error(ErrorCode::Truncation, "header shorter than declared");

    EmbeddingSet set;
    std::size_t dim = 0;
    std::size_t count = 0;
    try {
        const auto header = nlohmann::json::parse(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                                  bytes.begin() + static_cast<std::ptrdiff_t>(pos + header_len));
        set.word = header.at("word").get<std::string>();
        dim = header.at("dim").get<std::size_t>();
        count = header.at("count").get<std::size_t>();
        if (header.at("dtype").get<std::string>() != "f32le") {
            throw Error(ErrorCode::Format, "unsupported dtype " + header.at("dtype").get<std::string>());
        }
        set.context_ids = header.at("context_ids").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("invalid header: ") + e.what());
    }
    pos += header_len;
    if (dim == 0 || count == 0) throw Error(ErrorCode::Format, "header declares an empty set");
    if (set.context_ids.size() != count) {
        throw Error(ErrorCode::Format, "header count disagrees with context_ids length");
    }

    const std::size_t payload = bytes.size() - pos;
    const std::size_t expected = 4 * count * dim;
    if (payload < expected) {
        throw Error(ErrorCode::Truncation, "payload has " + std::to_string(payload) + " bytes, expected " +
                                               std::to_string(expected));
    }
    if (payload > expected) throw Error(ErrorCode::Format, "trailing bytes after payload");

    std::vector<float> values(count * dim);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = std::bit_cast<float>(get_u32le(data + pos + 4 * i));
    }
    set.vectors = FloatMatrix(count, dim, std::move(values));
    validate(set);
    return set;
}

void save_embv1(const EmbeddingSet& set, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    write_embv1(set, out);
}

EmbeddingSet load_embv1(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_embv1(in);
}

SenseLabeling read_labels_jsonl(std::istream& in) {
    SenseLabeling labeling;
    bool first = true;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = "labels line " + std::to_string(line_no);
        std::string id, target, source, label;
        try {
            const auto j = nlohmann::json::parse(line);
            id = j.at("context_id").get<std::string>();
            target = j.at("target").get<std::string>();
            source = j.at("source").get<std::string>();
            label = j.at("label").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Format, where + ": " + e.what());
        }
        if (label.empty()) throw Error(ErrorCode::Validation, where + ": empty label");
        if (first) {
            labeling.target = target;
            labeling.source = source;
            first = false;
        } else if (target != labeling.target || source != labeling.source) {
            throw Error(ErrorCode::Format, where + ": mixed target/source within one label file");
        }
        if (!labeling.entries.emplace(id, label).second) {
            throw Error(ErrorCode::Validation, where + ": duplicate context_id " + id);
        }
    }
    return labeling;
}

void write_labels_jsonl(std::ostream& out, const SenseLabeling& labeling) {
    for (const auto& [id, label] : labeling.entries) {
        nlohmann::ordered_json j;
        j["context_id"] = id;
        j["target"] = labeling.target;
        j["source"] = labeling.source;
        j["label"] = label;
        out << j.dump() << '\n';
    }
}

SenseLabeling load_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_labels_jsonl(in);
}

LabeledEmbeddingSet attach_labels(const EmbeddingSet& set, const SenseLabeling& labeling) {
    std::vector<std::size_t> keep;
    std::vector<std::string> labels;
    for (std::size_t r = 0; r < set.count(); ++r) {
        auto it = labeling.entries.find(set.context_ids[r]);
        if (it == labeling.entries.end()) continue;
        keep.push_back(r);
        labels.push_back(it->second);
    }
    if (keep.empty()) {
        throw Error(ErrorCode::EmptyDataset, "no embedding rows of '" + set.word + "' carry a label");
    }
    LabeledEmbeddingSet out;
    out.set.word = set.word;
    out.set.vectors = FloatMatrix(keep.size(), set.dim());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.set.context_ids.push_back(set.context_ids[keep[k]]);
        const auto src = set.row(keep[k]);
        std::copy(src.begin(), src.end(), out.set.vectors.row(k).begin());
    }
    out.labels = std::move(labels);
    return out;
}

}  // namespace ambigeo::embstore
