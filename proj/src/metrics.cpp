#include "hetrag/metrics.hpp"

#include "hetrag/decimal.hpp"
#include "hetrag/errors.hpp"
#include "hetrag/text.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace hetrag {

double hit_at_k(const std::vector<HitRecord>& records, std::size_t k) {
    if (k < 1) throw ValidationError("HiT@K requires K >= 1");
    if (records.empty()) throw MetricError("HiT@K is undefined over zero questions");
    std::size_t hits = 0;
    for (const auto& r : records) {
        const auto end = r.ranking.begin() + static_cast<std::ptrdiff_t>(std::min(k, r.ranking.size()));
        if (std::find(r.ranking.begin(), end, r.gold_doc_id) != end) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

std::string normalize_answer(std::string_view s) {
    std::string out;
    for (char c : text::to_lower(text::trim(s))) {
        if (c == '$' || c == ',') continue;
        out.push_back(c);
    }
    return text::collapse_whitespace(out);
}

namespace {

struct NormalizedNumber {
    Decimal value;
    int places = 0;
    bool percent = false;
};

std::optional<NormalizedNumber> as_number(const std::string& normalized) {
    std::string s = normalized;
    bool percent = false;
    if (!s.empty() && s.back() == '%') {
        percent = true;
        s.pop_back();
        s = text::trim(s);
    }
    auto value = Decimal::parse(s);
    if (!value) return std::nullopt;
    const auto dot = s.find('.');
    const int places = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
    return NormalizedNumber{*value, places, percent};
}

}  // namespace

bool exact_match(std::string_view pred, std::string_view gold) {
    const std::string p = normalize_answer(pred);
    const std::string g = normalize_answer(gold);
    const auto pn = as_number(p);
    const auto gn = as_number(g);
    if (pn && gn) {
        if (pn->percent != gn->percent) return false;
        return pn->value.round_places(gn->places) == gn->value;
    }
    return p == g;
}

}  // namespace hetrag
