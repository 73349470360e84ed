#include "jacobi/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace jacobi {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kind_names[] = {"matrix", "chain", "spectra_pair", "measure"};

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw FormatError(source_ + ": " + path + ": " + what);
    }

    const Json& field(const Json& object, const std::string& path, const char* key) const {
        if (!object.is_object()) fail(path, "expected an object");
        const auto it = object.find(key);
        if (it == object.end()) fail(path, std::string("missing field '") + key + "'");
        return *it;
    }

    void only_fields(const Json& object, const std::string& path, std::set<std::string> allowed) const {
        for (const auto& [key, value] : object.items()) {
            if (!allowed.contains(key)) fail(path, "unknown field '" + key + "'");
        }
    }

    template <Real R>
    R real(const Json& node, const std::string& path) const {
        std::string text;
        if (node.is_string()) {
            text = node.get<std::string>();
        } else if (node.is_number()) {
            text = node.dump();
        } else {
            fail(path, "expected a number or numeric string");
        }
        try {
            return parse_real<R>(text);
        } catch (const Error&) {
            fail(path, "'" + text + "' is not a number");
        }
    }

    template <Real R>
    std::vector<R> reals(const Json& node, const std::string& path) const {
        if (!node.is_array()) fail(path, "expected an array");
        std::vector<R> out;
        out.reserve(node.size());
        for (std::size_t i = 0; i < node.size(); ++i) {
            out.push_back(real<R>(node[i], path + "[" + std::to_string(i) + "]"));
        }
        return out;
    }

    template <class F>
    auto validated(const std::string& path, F&& build) const {
        try {
            return build();
        } catch (const Error& e) {
            fail(path, e.what());
        }
    }

private:
    std::string source_;
};

template <Real R>
Json real_array(std::span<const R> values) {
    Json out = Json::array();
    for (const R& v : values) out.push_back(format_real(v));
    return out;
}

template <Real R>
Payload<R> read_payload(const Reader& in, ProblemKind kind, const Json& p) {
    const std::string at = "payload";
    switch (kind) {
        case ProblemKind::Matrix: {
            in.only_fields(p, at, {"q", "b"});
            auto q = in.reals<R>(in.field(p, at, "q"), at + ".q");
            auto b = in.reals<R>(in.field(p, at, "b"), at + ".b");
            return in.validated(at, [&] { return JacobiMatrix<R>(std::move(q), std::move(b)); });
        }
        case ProblemKind::Chain: {
            in.only_fields(p, at, {"masses", "springs", "terminal_spring"});
            auto m = in.reals<R>(in.field(p, at, "masses"), at + ".masses");
            auto k = in.reals<R>(in.field(p, at, "springs"), at + ".springs");
            R terminal(0);
            if (p.contains("terminal_spring")) terminal = in.real<R>(p["terminal_spring"], at + ".terminal_spring");
            return in.validated(at, [&] { return MassSpringChain<R>(std::move(m), std::move(k), terminal); });
        }
        case ProblemKind::SpectraPair: {
            in.only_fields(p, at, {"lambdas", "mus", "shift", "hint"});
            SpectraPairRecord<R> record;
            record.lambdas = in.reals<R>(in.field(p, at, "lambdas"), at + ".lambdas");
            record.mus = in.reals<R>(in.field(p, at, "mus"), at + ".mus");
            for (const auto* list : {&record.lambdas, &record.mus}) {
                const std::string name = list == &record.lambdas ? ".lambdas" : ".mus";
                for (std::size_t i = 1; i < list->size(); ++i) {
                    if (!((*list)[i - 1] < (*list)[i])) {
                        in.fail(at + name + "[" + std::to_string(i) + "]", "values must be strictly increasing");
                    }
                }
            }
            if (p.contains("shift")) {
                const Json& s = p["shift"];
                if (!s.is_string()) in.fail(at + ".shift", "expected a string");
                record.shift = in.validated(at + ".shift", [&] { return shift_from_string(s.get<std::string>()); });
            }
            if (p.contains("hint")) {
                const Json& h = p["hint"];
                const std::string hp = at + ".hint";
                if (!h.is_object() || h.size() != 1) in.fail(hp, "expected exactly one of q1, alpha0, theta");
                const auto& [key, value] = *h.items().begin();
                const R v = in.real<R>(value, hp + "." + key);
                if (key == "q1") {
                    record.hint = Q1Hint<R>{v};
                } else if (key == "alpha0") {
                    record.hint = Alpha0Hint<R>{v};
                } else if (key == "theta") {
                    record.hint = ThetaHint<R>{v};
                } else {
                    in.fail(hp, "unknown hint '" + key + "'");
                }
            }
            return record;
        }
        case ProblemKind::Measure: {
            in.only_fields(p, at, {"nodes", "weights"});
            auto nodes = in.reals<R>(in.field(p, at, "nodes"), at + ".nodes");
            auto weights = in.reals<R>(in.field(p, at, "weights"), at + ".weights");
            return in.validated(at, [&] { return SpectralMeasure<R>(std::move(nodes), std::move(weights)); });
        }
    }
    in.fail(at, "unknown kind");
}

template <Real R>
Json write_payload(const Payload<R>& payload) {
    Json p = Json::object();
    if (const auto* m = std::get_if<JacobiMatrix<R>>(&payload)) {
        p["q"] = real_array<R>(m->diagonal());
        p["b"] = real_array<R>(m->off_diagonal());
    } else if (const auto* c = std::get_if<MassSpringChain<R>>(&payload)) {
        p["masses"] = real_array<R>(c->masses());
        p["springs"] = real_array<R>(c->springs());
        p["terminal_spring"] = format_real(c->terminal_spring());
    } else if (const auto* s = std::get_if<SpectraPairRecord<R>>(&payload)) {
        p["lambdas"] = real_array<R>(s->lambdas);
        p["mus"] = real_array<R>(s->mus);
        if (s->shift) p["shift"] = std::string(to_string(*s->shift));
        if (s->hint) {
            Json h = Json::object();
            std::visit(
                [&](const auto& hint) {
                    using H = std::decay_t<decltype(hint)>;
                    if constexpr (std::is_same_v<H, Q1Hint<R>>) {
                        h["q1"] = format_real(hint.q1);
                    } else if constexpr (std::is_same_v<H, Alpha0Hint<R>>) {
                        h["alpha0"] = format_real(hint.alpha0);
                    } else {
                        h["theta"] = format_real(hint.theta);
                    }
                },
                *s->hint);
            p["hint"] = h;
        }
    } else {
        const auto& m = std::get<SpectralMeasure<R>>(payload);
        p["nodes"] = real_array<R>(m.nodes());
        p["weights"] = real_array<R>(m.weights());
    }
    return p;
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
    return kind_names[static_cast<std::size_t>(kind)];
}

template <Real R>
ProblemFile<R> parse_problem(std::string_view text, const std::string& source) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(source + ": " + e.what());
    }
    const Reader in(source);
    if (!doc.is_object()) in.fail("(root)", "expected an object");
    in.only_fields(doc, "(root)", {"schema_version", "kind", "payload", "metadata"});

    const Json& version = in.field(doc, "(root)", "schema_version");
    if (!version.is_string() || version.get<std::string>() != "1") {
        in.fail("schema_version", "unsupported version " + version.dump() + " (expected \"1\")");
    }
    const Json& kind_node = in.field(doc, "(root)", "kind");
    if (!kind_node.is_string()) in.fail("kind", "expected a string");
    const std::string kind_text = kind_node.get<std::string>();
    std::optional<ProblemKind> kind;
    for (std::size_t i = 0; i < std::size(kind_names); ++i) {
        if (kind_names[i] == kind_text) kind = static_cast<ProblemKind>(i);
    }
    if (!kind) in.fail("kind", "unknown kind '" + kind_text + "'");

    ProblemFile<R> file{read_payload<R>(in, *kind, in.field(doc, "(root)", "payload")), {}, "1"};
    if (doc.contains("metadata")) {
        const Json& meta = doc["metadata"];
        if (!meta.is_object()) in.fail("metadata", "expected an object");
        for (const auto& [key, value] : meta.items()) {
            file.metadata[key] = value.is_string() ? value.template get<std::string>() : value.dump();
        }
    }
    return file;
}

template <Real R>
ProblemFile<R> load_problem(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw FormatError(path.string() + ": file not found or unreadable");
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return parse_problem<R>(buffer.str(), path.string());
}

template <Real R>
std::string serialize_problem(const ProblemFile<R>& file) {
    Json doc = Json::object();
    doc["schema_version"] = file.schema_version;
    doc["kind"] = std::string(to_string(file.kind()));
    doc["payload"] = write_payload<R>(file.payload);
    Json meta = Json::object();
    for (const auto& [key, value] : file.metadata) meta[key] = value;
    doc["metadata"] = meta;
    return doc.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream stream(path, std::ios::binary | std::ios::trunc);
    if (!stream) throw FormatError(path.string() + ": cannot open for writing");
    stream << text;
    if (!stream) throw FormatError(path.string() + ": write failed");
}

template <Real R>
void save_problem(const ProblemFile<R>& file, const std::filesystem::path& path) {
    write_text_file(path, serialize_problem(file));
}

#define JACOBI_INSTANTIATE(R)                                                          \
    template ProblemFile<R> parse_problem(std::string_view, const std::string&);       \
    template ProblemFile<R> load_problem(const std::filesystem::path&);                \
    template std::string serialize_problem(const ProblemFile<R>&);                     \
    template void save_problem(const ProblemFile<R>&, const std::filesystem::path&);

JACOBI_INSTANTIATE(double)
JACOBI_INSTANTIATE(Extended)

}  // namespace jacobi
