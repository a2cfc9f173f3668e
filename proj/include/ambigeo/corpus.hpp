#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ambigeo::corpus {

struct Sentence {
    std::string text;
    std::size_t word_count = 0;

    bool operator==(const Sentence&) const = default;
};

struct Document {
    std::string doc_id;
    std::vector<Sentence> sentences;
};

struct Occurrence {
    std::string doc_id;
    std::size_t sentence_index = 0;
    std::size_t token_index = 0;
    std::string surface_form;
    std::size_t ordinal = 0;  // position among this target's matches in the document

    bool operator==(const Occurrence&) const = default;
};

struct ContextWindow {
    std::string context_id;
    std::string target;
    std::string doc_id;
    std::size_t span_start = 0;  // inclusive sentence indices
    std::size_t span_end = 0;
    std::string text;
    std::size_t word_count = 0;
    std::size_t target_char_offset = 0;  // byte offset of the surface form in text

    bool operator==(const ContextWindow&) const = default;
};

/// Number of maximal non-whitespace runs.
std::size_t count_words(std::string_view text);

Sentence make_sentence(std::string_view text);

/// Heuristic splitter: a boundary follows '.', '!' or '?' when the next
/// non-space character is an uppercase ASCII letter or the text ends.
/// Common abbreviations ("Mr.", "Dr.", "e.g.", "i.e.", "etc.") never end a
/// sentence. Sentence texts are trimmed; empty input yields no sentences.
std::vector<Sentence> segment_sentences(std::string_view raw_text);

Document make_document(std::string doc_id, std::string_view raw_text);
/// One sentence per non-blank line; bypasses the heuristic splitter.
Document make_presegmented_document(std::string doc_id, std::string_view lines);

/// Case-folded, edge-punctuation-stripped form of a token.
std::string normalize_token(std::string_view token);

std::vector<Occurrence> find_occurrences(const Document& doc, std::string_view target);

/// Grows a window symmetrically one sentence per side from the occurrence
/// sentence while doing so moves the word count strictly closer to
/// target_size. At the document edges only the available side is added.
ContextWindow build_window(const Document& doc, const Occurrence& occ, std::string_view target,
                           std::size_t target_size = 100);

/// All windows for every occurrence of target in doc, in document order.
std::vector<ContextWindow> build_windows(const Document& doc, std::string_view target,
                                         std::size_t target_size = 100);

void write_window_jsonl(std::ostream& out, const ContextWindow& window);
std::vector<ContextWindow> read_windows_jsonl(std::istream& in);

}  // namespace ambigeo::corpus
