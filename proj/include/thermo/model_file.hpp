#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "thermo/errors.hpp"
#include "thermo/riesz.hpp"
#include "thermo/sft.hpp"
#include "thermo/spin_chain.hpp"

namespace thermo {

enum class ModelKind { spin_chain, sft, riesz };

std::string to_string(ModelKind kind);

/// A model loaded from disk. Exactly one payload matches `kind`.
struct ModelFile {
    ModelKind kind = ModelKind::spin_chain;
    std::string name;
    std::string description;
    std::optional<SpinChainModel> spin_chain;
    std::optional<SftModel> sft;
    std::optional<RieszSpec> riesz;
};

enum class ModelFormat { yaml, json };

/// Syntax error with a 1-based source position.
class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& what);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Format from the extension: .json is JSON, anything else YAML.
ModelFormat format_for(const std::filesystem::path& path);

ModelFile parse_model(const std::filesystem::path& path);
ModelFile parse_model_text(std::string_view text, ModelFormat format);

/// Validates a decoded document against the schema of docs/model-format.md.
ModelFile model_from_json(const nlohmann::json& doc);

/// Canonical document: full matrices as [re, im] pairs, nonzero potential
/// values on allowed words, sorted keys.
nlohmann::json to_json(const ModelFile& model);
std::string serialize_model(const ModelFile& model, ModelFormat format);

}  // namespace thermo
