#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace wordladders {

enum class Language { EN, IT };

std::string_view to_string(Language lang);
std::optional<Language> parse_language(std::string_view text);

// Canonical lemma form: NFC, lowercase (root locale), trimmed, inner
// whitespace runs collapsed to a single space. Returns "" for blank input.
std::string normalize_lemma(std::string_view raw);

// Code-point view used by the edit-distance routines.
std::u32string to_code_points(std::string_view utf8);

std::string trim(std::string_view text);

}  // namespace wordladders
