#include "hetrag/prompts.hpp"

#include "hetrag/errors.hpp"
#include "hetrag/text.hpp"

#include <fstream>
#include <sstream>

namespace hetrag {

namespace {
#include "default_templates.inc"
}  // namespace

PromptTemplates::PromptTemplates() {
    for (const auto& [name, body] : kDefaultTemplates) templates_.emplace(name, body);
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
    PromptTemplates t;
    if (!std::filesystem::is_directory(dir)) {
        throw ConfigError("templates directory not found: " + dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        t.set(entry.path().stem().string(), ss.str());
    }
    return t;
}

const std::string& PromptTemplates::get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw ConfigError("unknown prompt template '" + name + "'");
    return it->second;
}

std::string PromptTemplates::render(const std::string& name,
                                    const std::map<std::string, std::string>& values) const {
    return text::render(get(name), [&](const std::string& key) -> const std::string* {
        auto it = values.find(key);
        return it == values.end() ? nullptr : &it->second;
    });
}

}  // namespace hetrag
