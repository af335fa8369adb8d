#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dialcomp {

std::string_view trim(std::string_view s);
std::string casefold(std::string_view s);

// Maximal runs of non-space characters.
std::vector<std::string> whitespace_tokens(std::string_view s);
size_t whitespace_token_count(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split_on(std::string_view s, std::string_view sep);

// Replaces every "{LABEL}" placeholder with its value; unknown placeholders
// are left untouched (registry load rejects them up front).
std::string substitute_placeholders(
    std::string_view tmpl,
    const std::vector<std::pair<std::string, std::string>>& fields);

// All "{LABEL}" placeholder names appearing in a template.
std::vector<std::string> placeholder_names(std::string_view tmpl);

}  // namespace dialcomp
