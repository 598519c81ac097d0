#include "thermo/model_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace thermo {

using nlohmann::json;

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::spin_chain: return "spin_chain";
        case ModelKind::sft: return "sft";
        case ModelKind::riesz: return "riesz";
    }
    return "unknown";
}

ParseError::ParseError(int line, int column, const std::string& what)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

ModelFormat format_for(const std::filesystem::path& path) {
    return path.extension() == ".json" ? ModelFormat::json : ModelFormat::yaml;
}

namespace {

json scalar_from_yaml(const YAML::Node& node) {
    const std::string& text = node.Scalar();
    // Quoted scalars carry the non-specific tag "!" and stay strings.
    if (node.Tag() == "!") return text;
    if (text == "true" || text == "false") return text == "true";
    if (text == "null" || text == "~") return nullptr;
    // YAML 1.2 core-schema specials; rejected later by the finiteness check.
    if (text == ".inf" || text == ".Inf" || text == ".INF" || text == "+.inf") return HUGE_VAL;
    if (text == "-.inf" || text == "-.Inf" || text == "-.INF") return -HUGE_VAL;
    if (text == ".nan" || text == ".NaN" || text == ".NAN") return std::nan("");
    try {
        std::size_t used = 0;
        const long long i = std::stoll(text, &used);
        if (used == text.size()) return i;
    } catch (const std::exception&) {
    }
    try {
        std::size_t used = 0;
        const double d = std::stod(text, &used);
        if (used == text.size()) return d;
    } catch (const std::exception&) {
    }
    return text;
}

json json_from_yaml(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined:
            return nullptr;
        case YAML::NodeType::Scalar:
            return scalar_from_yaml(node);
        case YAML::NodeType::Sequence: {
            json arr = json::array();
            for (const auto& item : node) arr.push_back(json_from_yaml(item));
            return arr;
        }
        case YAML::NodeType::Map: {
            json obj = json::object();
            for (const auto& kv : node) obj[kv.first.as<std::string>()] = json_from_yaml(kv.second);
            return obj;
        }
    }
    return nullptr;
}

std::pair<int, int> position_of(std::string_view text, std::size_t byte) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
    throw InvariantError("schema", "field '" + field + "': " + what);
}

const json& require(const json& doc, const std::string& field) {
    if (!doc.contains(field)) schema_error(field, "missing");
    return doc.at(field);
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) schema_error(field, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InvariantError("finite", "field '" + field + "' is not finite");
    return d;
}

long long integer(const json& v, const std::string& field) {
    if (!v.is_number_integer()) schema_error(field, "expected an integer");
    return v.get<long long>();
}

cplx complex_entry(const json& v, const std::string& field) {
    if (v.is_number()) return {number(v, field), 0.0};
    if (!v.is_array() || v.size() != 2) schema_error(field, "matrix entries are [re, im] pairs");
    return {number(v[0], field), number(v[1], field)};
}

CMatrix complex_matrix(const json& rows, const std::string& field) {
    if (!rows.is_array() || rows.empty()) schema_error(field, "expected a non-empty array of rows");
    const auto dim = static_cast<Eigen::Index>(rows.size());
    bool lower = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array()) schema_error(field, "rows must be arrays");
        if (rows[i].size() != i + 1) lower = false;
    }
    CMatrix m = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!lower && static_cast<Eigen::Index>(row.size()) != dim) {
            throw DimensionMismatchError("field '" + field + "': row " + std::to_string(i) + " has " +
                                         std::to_string(row.size()) + " entries, expected " + std::to_string(dim) +
                                         " (or a lower triangle)");
        }
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(row.size()); ++j) {
            m(i, j) = complex_entry(row[static_cast<std::size_t>(j)], field);
        }
    }
    if (lower && dim > 1) {
        // Mirror the lower triangle; the diagonal must already be real.
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = i + 1; j < dim; ++j) m(i, j) = std::conj(m(j, i));
        }
    }
    return m;
}

SpinChainModel spin_chain_from(const json& doc) {
    const long long d = integer(require(doc, "site_dim"), "site_dim");
    const long long r = integer(require(doc, "range"), "range");
    if (d < 2) throw InvariantError("site_dim", "site dimension must be >= 2, got " + std::to_string(d));
    if (r < 1) throw InvariantError("range", "range must be >= 1, got " + std::to_string(r));
    const double beta = doc.contains("beta") ? number(doc.at("beta"), "beta") : 1.0;
    Boundary boundary = Boundary::open;
    if (doc.contains("boundary")) {
        if (!doc.at("boundary").is_string()) schema_error("boundary", "expected open or periodic");
        boundary = parse_boundary(doc.at("boundary").get<std::string>());
    }
    CMatrix h = complex_matrix(require(doc, "interaction"), "interaction");
    return SpinChainModel(static_cast<int>(d), static_cast<int>(r), std::move(h), beta, boundary);
}

SftModel sft_from(const json& doc) {
    const json& rows = require(doc, "transitions");
    if (!rows.is_array() || rows.empty()) schema_error("transitions", "expected a square 0/1 matrix");
    const auto s = static_cast<Eigen::Index>(rows.size());
    if (doc.contains("alphabet") && integer(doc.at("alphabet"), "alphabet") != s) {
        throw DimensionMismatchError("alphabet size disagrees with the transition matrix");
    }
    Eigen::MatrixXi a(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != s) {
            throw DimensionMismatchError("transition matrix row " + std::to_string(i) + " has the wrong length");
        }
        for (Eigen::Index j = 0; j < s; ++j) a(i, j) = static_cast<int>(integer(row[static_cast<std::size_t>(j)], "transitions"));
    }
    const long long r = doc.contains("range") ? integer(doc.at("range"), "range") : 2;
    if (r < 2) throw InvariantError("range", "potential range must be >= 2");
    std::vector<double> phi(checked_pow(static_cast<std::size_t>(s), static_cast<int>(r), std::size_t{1} << 24), 0.0);
    if (doc.contains("potential")) {
        const json& list = doc.at("potential");
        if (!list.is_array()) schema_error("potential", "expected a list of {word, value} entries");
        for (const json& entry : list) {
            const json& word = require(entry, "word");
            if (!word.is_array() || static_cast<long long>(word.size()) != r) {
                throw DimensionMismatchError("potential word length must equal the range " + std::to_string(r));
            }
            Word w;
            for (const json& letter : word) {
                const long long l = integer(letter, "potential.word");
                if (l < 0 || l >= s) throw DimensionMismatchError("potential word letter outside the alphabet");
                w.push_back(static_cast<int>(l));
            }
            phi[word_index(w, static_cast<int>(s))] = number(require(entry, "value"), "potential.value");
        }
    }
    return SftModel(std::move(a), std::move(phi), static_cast<int>(r));
}

RieszSpec riesz_from(const json& doc) {
    const json& f = require(doc, "frequencies");
    const json& a = require(doc, "amplitudes");
    if (!f.is_array() || !a.is_array()) schema_error("frequencies", "frequencies and amplitudes must be arrays");
    std::vector<std::int64_t> freqs;
    std::vector<double> amps;
    for (const json& v : f) freqs.push_back(integer(v, "frequencies"));
    for (const json& v : a) amps.push_back(number(v, "amplitudes"));
    return RieszSpec(std::move(freqs), std::move(amps), number(require(doc, "q"), "q"));
}

json matrix_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        // + 0.0 folds -0 (from conjugating a mirrored entry) into +0.
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real() + 0.0, m(i, j).imag() + 0.0});
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit_yaml(YAML::Emitter& out, const json& v) {
    if (v.is_object()) {
        out << YAML::BeginMap;
        for (auto it = v.begin(); it != v.end(); ++it) {
            out << YAML::Key << it.key() << YAML::Value;
            emit_yaml(out, it.value());
        }
        out << YAML::EndMap;
    } else if (v.is_array()) {
        const bool flat = std::none_of(v.begin(), v.end(), [](const json& x) { return x.is_object(); });
        out << (flat ? YAML::Flow : YAML::Block) << YAML::BeginSeq;
        for (const auto& x : v) emit_yaml(out, x);
        out << YAML::EndSeq;
    } else if (v.is_string()) {
        out << YAML::DoubleQuoted << v.get<std::string>();
    } else if (v.is_boolean()) {
        out << v.get<bool>();
    } else if (v.is_number_integer()) {
        out << v.get<long long>();
    } else if (v.is_number()) {
        out << v.get<double>();
    } else {
        out << YAML::Null;
    }
}

}  // namespace

ModelFile model_from_json(const json& doc) {
    if (!doc.is_object()) schema_error("<root>", "expected a mapping");
    const json& kind = require(doc, "kind");
    if (!kind.is_string()) schema_error("kind", "expected spin_chain, sft or riesz");
    ModelFile out;
    if (doc.contains("name")) out.name = doc.at("name").is_string() ? doc.at("name").get<std::string>() : doc.at("name").dump();
    if (doc.contains("description")) {
        out.description = doc.at("description").is_string() ? doc.at("description").get<std::string>()
                                                             : doc.at("description").dump();
    }
    const std::string k = kind.get<std::string>();
    if (k == "spin_chain") {
        out.kind = ModelKind::spin_chain;
        out.spin_chain = spin_chain_from(doc);
    } else if (k == "sft") {
        out.kind = ModelKind::sft;
        out.sft = sft_from(doc);
    } else if (k == "riesz") {
        out.kind = ModelKind::riesz;
        out.riesz = riesz_from(doc);
    } else {
        schema_error("kind", "unknown kind '" + k + "'");
    }
    return out;
}

ModelFile parse_model_text(std::string_view text, ModelFormat format) {
    json doc;
    if (format == ModelFormat::json) {
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            const auto [line, column] = position_of(text, e.byte == 0 ? 0 : e.byte - 1);
            throw ParseError(line, column, e.what());
        }
    } else {
        try {
            doc = json_from_yaml(YAML::Load(std::string(text)));
        } catch (const YAML::ParserException& e) {
            throw ParseError(e.mark.line + 1, e.mark.column + 1, e.msg);
        }
    }
    return model_from_json(doc);
}

ModelFile parse_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model_text(buf.str(), format_for(path));
}

json to_json(const ModelFile& model) {
    json doc;
    doc["kind"] = to_string(model.kind);
    doc["name"] = model.name;
    doc["description"] = model.description;
    switch (model.kind) {
        case ModelKind::spin_chain: {
            const SpinChainModel& m = model.spin_chain.value();
            doc["site_dim"] = m.site_dim();
            doc["range"] = m.range();
            doc["beta"] = m.beta();
            doc["boundary"] = to_string(m.boundary());
            doc["interaction"] = matrix_json(m.local());
            break;
        }
        case ModelKind::sft: {
            const SftModel& m = model.sft.value();
            doc["alphabet"] = m.alphabet();
            doc["range"] = m.range();
            json rows = json::array();
            for (Eigen::Index i = 0; i < m.transitions().rows(); ++i) {
                json row = json::array();
                for (Eigen::Index j = 0; j < m.transitions().cols(); ++j) row.push_back(m.transitions()(i, j));
                rows.push_back(std::move(row));
            }
            doc["transitions"] = std::move(rows);
            json pot = json::array();
            for (std::size_t i = 0; i < m.potential().size(); ++i) {
                const Word w = word_from_index(i, m.alphabet(), m.range());
                if (m.potential()[i] != 0.0 && m.allowed(w)) pot.push_back({{"word", w}, {"value", m.potential()[i]}});
            }
            doc["potential"] = std::move(pot);
            break;
        }
        case ModelKind::riesz: {
            const RieszSpec& m = model.riesz.value();
            doc["frequencies"] = m.frequencies();
            doc["amplitudes"] = m.amplitudes();
            doc["q"] = m.q();
            break;
        }
    }
    return doc;
}

std::string serialize_model(const ModelFile& model, ModelFormat format) {
    const json doc = to_json(model);
    if (format == ModelFormat::json) return doc.dump(2) + "\n";
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    emit_yaml(out, doc);
    return std::string(out.c_str()) + "\n";
}

}  // namespace thermo
