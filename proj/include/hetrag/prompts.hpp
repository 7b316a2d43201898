#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace hetrag {

/// Named prompt templates with `{{placeholder}}` slots. Built-in defaults can be
/// overridden per name by `<dir>/<name>.txt`.
class PromptTemplates {
public:
    PromptTemplates();

    /// Defaults overlaid with every `*.txt` file found in `dir`.
    [[nodiscard]] static PromptTemplates load(const std::filesystem::path& dir);

    /// Throws ConfigError for unknown names.
    [[nodiscard]] const std::string& get(const std::string& name) const;
    void set(std::string name, std::string text) { templates_[std::move(name)] = std::move(text); }
    [[nodiscard]] std::string render(const std::string& name,
                                     const std::map<std::string, std::string>& values) const;

    [[nodiscard]] const std::map<std::string, std::string>& all() const { return templates_; }

private:
    std::map<std::string, std::string> templates_;
};

}  // namespace hetrag
