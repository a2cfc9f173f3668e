#include "ambigeo/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "ambigeo/error.hpp"

namespace ambigeo::corpus {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_terminal(char c) {
    return c == '.' || c == '!' || c == '?';
}

bool is_closer(char c) {
    return c == '"' || c == '\'' || c == ')' || c == ']';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

constexpr std::array<std::string_view, 9> kAbbreviations = {
    "mr.", "mrs.", "ms.", "dr.", "prof.", "e.g.", "i.e.", "etc.", "vs.",
};

bool is_abbreviation(std::string_view token) {
    const std::string lowered = ascii_lower(token);
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), lowered) != kAbbreviations.end();
}

struct Token {
    std::size_t offset;
    std::string_view text;
};

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        if (i >= text.size()) break;
        const std::size_t begin = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        tokens.push_back({begin, text.substr(begin, i - begin)});
    }
    return tokens;
}

bool is_edge_punct(char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

// Offset and length of the token with leading/trailing ASCII punctuation removed.
std::pair<std::size_t, std::size_t> strip_edges(std::string_view token) {
    std::size_t b = 0;
    std::size_t e = token.size();
    while (b < e && is_edge_punct(token[b])) ++b;
    while (e > b && is_edge_punct(token[e - 1])) --e;
    return {b, e - b};
}

std::size_t distance_to(std::size_t count, std::size_t target) {
    return count > target ? count - target : target - count;
}

}  // namespace

std::size_t count_words(std::string_view text) {
    return tokenize(text).size();
}

Sentence make_sentence(std::string_view text) {
    const std::string_view t = trim(text);
    return {std::string(t), count_words(t)};
}

std::vector<Sentence> segment_sentences(std::string_view raw) {
    std::vector<Sentence> sentences;
    auto flush = [&](std::size_t begin, std::size_t end) {
        const std::string_view piece = trim(raw.substr(begin, end - begin));
        if (!piece.empty()) sentences.push_back(make_sentence(piece));
    };

    std::size_t start = 0;
    std::size_t i = 0;
    while (i < raw.size()) {
        if (!is_terminal(raw[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < raw.size() && is_terminal(raw[j])) ++j;
        while (j < raw.size() && is_closer(raw[j])) ++j;
        std::size_t k = j;
        while (k < raw.size() && is_space(raw[k])) ++k;

        const bool at_end = k == raw.size();
        const bool before_upper =
            k > j && k < raw.size() && std::isupper(static_cast<unsigned char>(raw[k])) != 0;
        if (!at_end && !before_upper) {
            i = j;
            continue;
        }

        std::size_t token_begin = i;
        while (token_begin > start && !is_space(raw[token_begin - 1])) --token_begin;
        if (!at_end && is_abbreviation(raw.substr(token_begin, j - token_begin))) {
            i = j;
            continue;
        }
        flush(start, j);
        start = k;
        i = k;
    }
    if (start < raw.size()) flush(start, raw.size());
    return sentences;
}

Document make_document(std::string doc_id, std::string_view raw_text) {
    return {std::move(doc_id), segment_sentences(raw_text)};
}

Document make_presegmented_document(std::string doc_id, std::string_view lines) {
    Document doc{std::move(doc_id), {}};
    std::size_t pos = 0;
    while (pos <= lines.size()) {
        std::size_t nl = lines.find('\n', pos);
        if (nl == std::string_view::npos) nl = lines.size();
        const std::string_view line = trim(lines.substr(pos, nl - pos));
        if (!line.empty()) doc.sentences.push_back(make_sentence(line));
        pos = nl + 1;
    }
    return doc;
}

std::string normalize_token(std::string_view token) {
    const auto [offset, length] = strip_edges(token);
    return ascii_lower(token.substr(offset, length));
}

std::vector<Occurrence> find_occurrences(const Document& doc, std::string_view target) {
    const std::string wanted = normalize_token(target);
    std::vector<Occurrence> found;
    if (wanted.empty()) return found;
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        const auto tokens = tokenize(doc.sentences[s].text);
        for (std::size_t t = 0; t < tokens.size(); ++t) {
            if (normalize_token(tokens[t].text) != wanted) continue;
            const auto [offset, length] = strip_edges(tokens[t].text);
            found.push_back({doc.doc_id, s, t, std::string(tokens[t].text.substr(offset, length)),
                             found.size()});
        }
    }
    return found;
}

ContextWindow build_window(const Document& doc, const Occurrence& occ, std::string_view target,
                           std::size_t target_size) {
    const auto& sentences = doc.sentences;
    if (occ.sentence_index >= sentences.size()) {
        throw Error(ErrorCode::Precondition, "occurrence sentence index outside document " + doc.doc_id);
    }
    const std::size_t last = sentences.size() - 1;
    std::size_t start = occ.sentence_index;
    std::size_t end = occ.sentence_index;
    std::size_t current = sentences[start].word_count;

    while (start > 0 || end < last) {
        std::size_t broader = current;
        const std::size_t next_start = start > 0 ? start - 1 : start;
        const std::size_t next_end = end < last ? end + 1 : end;
        if (next_start != start) broader += sentences[next_start].word_count;
        if (next_end != end) broader += sentences[next_end].word_count;
        if (distance_to(broader, target_size) >= distance_to(current, target_size)) break;
        start = next_start;
        end = next_end;
        current = broader;
    }

    ContextWindow window;
    window.context_id = doc.doc_id + "#" + std::to_string(occ.ordinal);
    window.target = normalize_token(target);
    window.doc_id = doc.doc_id;
    window.span_start = start;
    window.span_end = end;
    window.word_count = current;
    for (std::size_t s = start; s <= end; ++s) {
        if (s > start) window.text += ' ';
        if (s == occ.sentence_index) {
            const auto tokens = tokenize(sentences[s].text);
            if (occ.token_index >= tokens.size()) {
                throw Error(ErrorCode::Precondition, "occurrence token index outside sentence");
            }
            const auto& token = tokens[occ.token_index];
            window.target_char_offset = window.text.size() + token.offset + strip_edges(token.text).first;
        }
        window.text += sentences[s].text;
    }
    return window;
}

std::vector<ContextWindow> build_windows(const Document& doc, std::string_view target,
                                         std::size_t target_size) {
    std::vector<ContextWindow> windows;
    for (const auto& occ : find_occurrences(doc, target)) {
        windows.push_back(build_window(doc, occ, target, target_size));
    }
    return windows;
}

void write_window_jsonl(std::ostream& out, const ContextWindow& w) {
    nlohmann::ordered_json j;
    j["context_id"] = w.context_id;
    j["target"] = w.target;
    j["doc_id"] = w.doc_id;
    j["sentence_span"] = {w.span_start, w.span_end};
    j["text"] = w.text;
    j["word_count"] = w.word_count;
    j["target_char_offset"] = w.target_char_offset;
    out << j.dump() << '\n';
}

std::vector<ContextWindow> read_windows_jsonl(std::istream& in) {
    std::vector<ContextWindow> windows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            ContextWindow w;
            w.context_id = j.at("context_id").get<std::string>();
            w.target = j.at("target").get<std::string>();
            w.doc_id = j.at("doc_id").get<std::string>();
            w.span_start = j.at("sentence_span").at(0).get<std::size_t>();
            w.span_end = j.at("sentence_span").at(1).get<std::size_t>();
            w.text = j.at("text").get<std::string>();
            w.word_count = j.at("word_count").get<std::size_t>();
            w.target_char_offset = j.at("target_char_offset").get<std::size_t>();
            windows.push_back(std::move(w));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Format, "windows line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return windows;
}

}  // namespace ambigeo::corpus
