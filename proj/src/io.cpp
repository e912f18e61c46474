#include "statsim/io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace statsim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::ParseError, path.string() + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() +
                                                       static_cast<std::ptrdiff_t>(offset),
                                                   '\n'));
}

json parse_json_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        raise(Errc::ParseError, path.string() + ":" + std::to_string(line_of_offset(text, e.byte)) +
                                    ": " + e.what());
    }
}

enum class WeightKind { Unknown, Float, Exact };

// Enforces the all-float-or-all-rational rule across a whole document.
class WeightReader {
public:
    explicit WeightReader(std::string context) : context_(std::move(context)) {}

    WeightKind kind() const { return kind_; }

    double as_double(const json& v, const std::string& where) {
        expect(WeightKind::Float, v, where);
        return v.get<double>();
    }

    Rational as_rational(const json& v, const std::string& where) {
        expect(WeightKind::Exact, v, where);
        const auto parsed = parse_rational(v.get<std::string>());
        if (!parsed)
            raise(Errc::ParseError,
                  context_ + ": " + where + ": '" + v.get<std::string>() +
                      "' is not a rational of the form num or num/den");
        return *parsed;
    }

    WeightKind classify(const json& v, const std::string& where) {
        WeightKind k;
        if (v.is_number()) {
            k = WeightKind::Float;
        } else if (v.is_string()) {
            k = WeightKind::Exact;
        } else {
            raise(Errc::ParseError,
                  context_ + ": " + where + ": weight must be a number or a rational string");
        }
        if (kind_ == WeightKind::Unknown) kind_ = k;
        if (k != kind_)
            raise(Errc::ParseError,
                  context_ + ": mixed float and rational weights in one file");
        return k;
    }

private:
    void expect(WeightKind k, const json& v, const std::string& where) {
        if (classify(v, where) != k)
            throw std::logic_error("weight kind confusion");  // guarded by caller
    }

    std::string context_;
    WeightKind kind_ = WeightKind::Unknown;
};

const json& require_field(const json& doc, const char* name, const std::string& context) {
    const auto it = doc.find(name);
    if (it == doc.end())
        raise(Errc::ParseError, context + ": missing field '" + std::string(name) + "'");
    return *it;
}

WeightKind scan_kind(WeightReader& reader, const json& values, const std::string& where) {
    if (!values.is_array() || values.empty())
        raise(Errc::ParseError, where + ": expected a nonempty array");
    WeightKind k = WeightKind::Unknown;
    for (const json& v : values) k = reader.classify(v, where);
    return k;
}

template <typename W>
std::vector<W> read_weights(WeightReader& reader, const json& values, const std::string& where) {
    std::vector<W> out;
    out.reserve(values.size());
    for (const json& v : values) {
        if constexpr (std::is_same_v<W, double>)
            out.push_back(reader.as_double(v, where));
        else
            out.push_back(reader.as_rational(v, where));
    }
    return out;
}

}  // namespace

LoadedProduct load_product_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path);
    const std::string ctx = path.string();
    if (!doc.is_object()) raise(Errc::ParseError, ctx + ": expected a JSON object");

    const json& alphabet_field = require_field(doc, "alphabet", ctx);
    if (!alphabet_field.is_number_unsigned() || alphabet_field.get<std::uint64_t>() == 0)
        raise(Errc::ParseError, ctx + ": 'alphabet' must be a positive integer");
    const std::size_t alphabet = alphabet_field.get<std::size_t>();

    const json& marginals = require_field(doc, "marginals", ctx);
    if (!marginals.is_array() || marginals.empty())
        raise(Errc::ParseError, ctx + ": 'marginals' must be a nonempty array");

    WeightReader reader(ctx);
    for (std::size_t i = 0; i < marginals.size(); ++i)
        scan_kind(reader, marginals[i], ctx + ": marginal " + std::to_string(i));

    auto build = [&]<typename W>() -> LoadedProduct {
        std::vector<Marginal<W>> ms;
        ms.reserve(marginals.size());
        for (std::size_t i = 0; i < marginals.size(); ++i) {
            const std::string where = ctx + ": marginal " + std::to_string(i);
            auto weights = read_weights<W>(reader, marginals[i], where);
            if (weights.size() != alphabet)
                raise(Errc::DimensionMismatch,
                      where + ": has " + std::to_string(weights.size()) +
                          " weights, alphabet is " + std::to_string(alphabet));
            ms.emplace_back(std::move(weights));
        }
        return Product<W>(std::move(ms));
    };

    if (reader.kind() == WeightKind::Exact) return build.operator()<Rational>();
    return build.operator()<double>();
}

LoadedProblem load_problem_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path);
    const std::string ctx = path.string();
    if (!doc.is_object()) raise(Errc::ParseError, ctx + ": expected a JSON object");

    WeightReader reader(ctx);
    if (doc.contains("prior")) {
        const json& prior = require_field(doc, "prior", ctx);
        const json& l0 = require_field(doc, "likelihood0", ctx);
        const json& l1 = require_field(doc, "likelihood1", ctx);
        if (!prior.is_array() || prior.size() != 2)
            raise(Errc::ParseError, ctx + ": 'prior' must be an array of two weights");
        scan_kind(reader, prior, ctx + ": prior");
        scan_kind(reader, l0, ctx + ": likelihood0");
        scan_kind(reader, l1, ctx + ": likelihood1");
        auto build = [&]<typename W>() -> LoadedProblem {
            auto pr = read_weights<W>(reader, prior, ctx + ": prior");
            return Prediction<W>(pr[0], pr[1],
                                 read_weights<W>(reader, l0, ctx + ": likelihood0"),
                                 read_weights<W>(reader, l1, ctx + ": likelihood1"));
        };
        if (reader.kind() == WeightKind::Exact) return build.operator()<Rational>();
        return build.operator()<double>();
    }

    if (doc.contains("p1")) {
        const json& p1 = require_field(doc, "p1", ctx);
        const json& psi = require_field(doc, "psi", ctx);
        const json& eta = require_field(doc, "eta", ctx);
        reader.classify(p1, ctx + ": p1");
        scan_kind(reader, psi, ctx + ": psi");
        scan_kind(reader, eta, ctx + ": eta");
        auto build = [&]<typename W>() -> LoadedProblem {
            W p;
            if constexpr (std::is_same_v<W, double>)
                p = reader.as_double(p1, ctx + ": p1");
            else
                p = reader.as_rational(p1, ctx + ": p1");
            return BernoulliTest<W>(std::move(p), read_weights<W>(reader, psi, ctx + ": psi"),
                                    read_weights<W>(reader, eta, ctx + ": eta"));
        };
        if (reader.kind() == WeightKind::Exact) return build.operator()<Rational>();
        return build.operator()<double>();
    }

    raise(Errc::ParseError,
          ctx + ": expected a prediction problem ('prior') or a Bernoulli test ('p1')");
}

CnfFormula load_dimacs(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::ParseError, path.string() + ": cannot open file");
    try {
        return parse_dimacs(in);
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::string bayes_net_to_json(const BayesNet& net) {
    ordered_json doc;
    doc["nodes"] = ordered_json::array();
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        const BayesNode& node = net.node(i);
        ordered_json jn;
        jn["id"] = i;
        jn["parents"] = node.parents;
        ordered_json rows = ordered_json::array();
        for (const auto& row : node.cpt) {
            ordered_json jr = ordered_json::array();
            for (const Rational& v : row) jr.push_back(to_string(v));
            rows.push_back(std::move(jr));
        }
        jn["cpt"] = std::move(rows);
        doc["nodes"].push_back(std::move(jn));
    }
    return doc.dump(2) + "\n";
}

void save_bayes_net_json(const std::filesystem::path& path, const BayesNet& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::ParseError, path.string() + ": cannot open file for writing");
    out << bayes_net_to_json(net);
}

BayesNet load_bayes_net_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path);
    const std::string ctx = path.string();
    const json& nodes = require_field(doc, "nodes", ctx);
    if (!nodes.is_array() || nodes.empty())
        raise(Errc::ParseError, ctx + ": 'nodes' must be a nonempty array");

    std::vector<BayesNode> out;
    std::size_t alphabet = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = ctx + ": node " + std::to_string(i);
        const json& jn = nodes[i];
        const json& id = require_field(jn, "id", where);
        if (!id.is_number_unsigned() || id.get<std::size_t>() != i)
            raise(Errc::ParseError, where + ": ids must be 0..n-1 in order");
        BayesNode node;
        for (const json& p : require_field(jn, "parents", where))
            node.parents.push_back(p.get<int>());
        for (const json& jr : require_field(jn, "cpt", where)) {
            std::vector<Rational> row;
            for (const json& v : jr) {
                if (!v.is_string())
                    raise(Errc::ParseError, where + ": CPT entries must be rational strings");
                const auto parsed = parse_rational(v.get<std::string>());
                if (!parsed)
                    raise(Errc::ParseError,
                          where + ": bad rational '" + v.get<std::string>() + "'");
                row.push_back(*parsed);
            }
            if (alphabet == 0) alphabet = row.size();
            node.cpt.push_back(std::move(row));
        }
        out.push_back(std::move(node));
    }
    return BayesNet(std::move(out), alphabet);
}

std::string file_digest(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace statsim
