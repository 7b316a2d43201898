#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hetrag::text {

[[nodiscard]] std::string trim(std::string_view s);
[[nodiscard]] std::string to_lower(std::string_view s);
/// Collapse every run of whitespace into one space and trim the ends.
[[nodiscard]] std::string collapse_whitespace(std::string_view s);
[[nodiscard]] std::string join(const std::vector<std::string>& parts, std::string_view sep);
[[nodiscard]] bool starts_with_icase(std::string_view s, std::string_view prefix);

/// Retrieval tokenizer: lowercase, split on non-alphanumerics, digit runs kept
/// as tokens, no stemming and no stop words.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view s);

/// Replace every `{{name}}` in `tmpl` using `lookup`; unknown names are left as-is.
template <typename Lookup>
std::string render(std::string_view tmpl, Lookup&& lookup) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        auto open = tmpl.find("{{", pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        auto close = tmpl.find("}}", open + 2);
        if (close == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        out.append(tmpl.substr(pos, open - pos));
        std::string name(tmpl.substr(open + 2, close - open - 2));
        if (const std::string* value = lookup(name)) {
            out.append(*value);
        } else {
            out.append(tmpl.substr(open, close + 2 - open));
        }
        pos = close + 2;
    }
    return out;
}

/// 64-bit FNV-1a, stable across runs and platforms.
[[nodiscard]] std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 14695981039346656037ULL);
[[nodiscard]] std::string hex64(std::uint64_t value);

}  // namespace hetrag::text
