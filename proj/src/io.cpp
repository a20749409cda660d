#include "neurise/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace neurise {

using json = nlohmann::ordered_json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path, 0, "cannot open file");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(path, 0, e.what());
    }
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error(path, 0, "cannot open file for writing");
    out << j.dump(2) << "\n";
}

std::string kind_name(TermKind kind) {
    return kind == TermKind::monomial ? "monomial" : "indicator";
}

TermKind kind_from_name(const std::string& name, const std::string& path) {
    if (name == "monomial") return TermKind::monomial;
    if (name == "indicator") return TermKind::indicator;
    throw parse_error(path, 0, "unknown term kind '" + name + "'");
}

json mlp_to_json(const Mlp& net) {
    return json{{"spec",
                 {{"input_dim", net.spec.input_dim},
                  {"d", net.spec.hidden_depth},
                  {"w", net.spec.hidden_width},
                  {"output_dim", net.spec.output_dim}}},
                {"params", net.params}};
}

Mlp mlp_from_json(const json& j, const std::string& path) {
    Mlp net;
    try {
        const json& spec = j.at("spec");
        net.spec.input_dim = spec.at("input_dim").get<int>();
        net.spec.hidden_depth = spec.at("d").get<int>();
        net.spec.hidden_width = spec.at("w").get<int>();
        net.spec.output_dim = spec.at("output_dim").get<int>();
        net.params = j.at("params").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path, 0, std::string("bad net file: ") + e.what());
    }
    if (net.params.size() != mlp_param_count(net.spec))
        throw parse_error(path, 0, "net file has " + std::to_string(net.params.size()) +
                                       " params, spec needs " +
                                       std::to_string(mlp_param_count(net.spec)));
    return net;
}

}  // namespace

void write_energy_model(const EnergyModel& model, const std::string& path) {
    json terms = json::array();
    for (const BasisTerm& t : model.terms) {
        json jt{{"sites", t.sites}, {"kind", kind_name(t.kind)}};
        if (t.kind == TermKind::indicator)
            jt["labels"] = std::vector<int>(t.labels.begin(), t.labels.end());
        else
            jt["labels"] = nullptr;
        jt["strength"] = t.strength;
        terms.push_back(std::move(jt));
    }
    save_json(json{{"p", model.p}, {"q", model.alphabet.q}, {"terms", std::move(terms)}}, path);
}

EnergyModel read_energy_model(const std::string& path) {
    const json j = load_json(path);
    try {
        const int p = j.at("p").get<int>();
        const Alphabet alphabet(j.at("q").get<int>());
        std::vector<BasisTerm> terms;
        for (const json& jt : j.at("terms")) {
            BasisTerm t;
            t.sites = jt.at("sites").get<std::vector<int>>();
            t.kind = kind_from_name(jt.at("kind").get<std::string>(), path);
            if (!jt.at("labels").is_null()) {
                for (int label : jt.at("labels").get<std::vector<int>>()) {
                    if (label < 0 || label > 255) throw parse_error(path, 0, "label out of range");
                    t.labels.push_back(static_cast<Symbol>(label));
                }
            }
            t.strength = jt.at("strength").get<double>();
            terms.push_back(std::move(t));
        }
        return EnergyModel(p, alphabet, std::move(terms));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path, 0, std::string("bad model file: ") + e.what());
    } catch (const invalid_input& e) {
        throw parse_error(path, 0, std::string("invalid model: ") + e.what());
    }
}

void write_samples(const SampleSet& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error(path, 0, "cannot open file for writing");
    out << "# p=" << samples.p() << " q=" << samples.alphabet().q << "\n";
    for (std::size_t t = 0; t < samples.size(); ++t) {
        const Symbol* row = samples.row(t);
        for (int i = 0; i < samples.p(); ++i) {
            if (i) out << ' ';
            out << static_cast<int>(row[i]);
        }
        out << '\n';
    }
}

SampleSet read_samples(const std::string& path, std::optional<Alphabet> alphabet) {
    std::ifstream in(path);
    if (!in) throw parse_error(path, 0, "cannot open file");
    std::string line;
    long line_no = 0;
    int p = -1;
    std::vector<Symbol> data;
    int max_symbol = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            // optional "# p=<p> q=<q>" header
            std::size_t pos = line.find("p=");
            if (pos != std::string::npos) p = std::atoi(line.c_str() + pos + 2);
            pos = line.find("q=");
            if (pos != std::string::npos && !alphabet) alphabet = Alphabet(std::atoi(line.c_str() + pos + 2));
            continue;
        }
        std::istringstream row(line);
        int count = 0;
        long value = 0;
        while (row >> value) {
            if (value < 0 || value > 255)
                throw parse_error(path, line_no, "symbol " + std::to_string(value) + " out of range");
            if (alphabet && !alphabet->valid(static_cast<Symbol>(value)))
                throw parse_error(path, line_no,
                                  "symbol " + std::to_string(value) + " out of range for q=" +
                                      std::to_string(alphabet->q));
            max_symbol = std::max(max_symbol, static_cast<int>(value));
            data.push_back(static_cast<Symbol>(value));
            ++count;
        }
        if (!row.eof()) throw parse_error(path, line_no, "non-numeric token in sample row");
        if (p == -1) p = count;
        if (count != p)
            throw parse_error(path, line_no,
                              "row has " + std::to_string(count) + " symbols, expected " +
                                  std::to_string(p));
    }
    if (p <= 0 || data.empty()) throw parse_error(path, line_no, "no sample rows found");
    const Alphabet a = alphabet ? *alphabet : Alphabet(std::max(2, max_symbol + 1));
    return SampleSet(p, a, std::move(data));
}

void write_mlp(const Mlp& net, const std::string& path) { save_json(mlp_to_json(net), path); }

Mlp read_mlp(const std::string& path) { return mlp_from_json(load_json(path), path); }

namespace {

std::string flavor_name(ConditionalFlavor flavor) {
    switch (flavor) {
        case ConditionalFlavor::linear: return "linear";
        case ConditionalFlavor::binary_net: return "binary-net";
        default: return "general-net";
    }
}

}  // namespace

void write_conditional(const ConditionalModel& model, const std::string& path) {
    json j{{"u", model.u},
           {"flavor", flavor_name(model.flavor)},
           {"p", model.p},
           {"q", model.alphabet.q}};
    if (model.flavor == ConditionalFlavor::linear) {
        j["basis"] = {{"L", model.basis.max_order}, {"kind", kind_name(model.basis.kind)}};
        j["theta"] = model.theta;
    } else {
        j["net"] = mlp_to_json(model.net);
    }
    save_json(j, path);
}

ConditionalModel read_conditional(const std::string& path) {
    const json j = load_json(path);
    try {
        const int u = j.at("u").get<int>();
        const int p = j.at("p").get<int>();
        const Alphabet alphabet(j.at("q").get<int>());
        const std::string flavor = j.at("flavor").get<std::string>();
        if (flavor == "linear") {
            PartialBasis basis = build_partial_basis(
                p, alphabet, j.at("basis").at("L").get<int>(), u,
                kind_from_name(j.at("basis").at("kind").get<std::string>(), path));
            return make_linear_conditional(std::move(basis),
                                           j.at("theta").get<std::vector<double>>());
        }
        if (flavor != "binary-net" && flavor != "general-net")
            throw parse_error(path, 0, "unknown flavor '" + flavor + "'");
        return make_net_conditional(u, p, alphabet, mlp_from_json(j.at("net"), path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path, 0, std::string("bad conditional file: ") + e.what());
    } catch (const invalid_input& e) {
        throw parse_error(path, 0, std::string("invalid conditional: ") + e.what());
    }
}

void write_energy_net(const EnergyNet& net, const std::string& path) {
    save_json(json{{"p", net.p}, {"q", 2}, {"net", mlp_to_json(net.net)}}, path);
}

EnergyNet read_energy_net(const std::string& path) {
    const json j = load_json(path);
    try {
        return make_energy_net(j.at("p").get<int>(), mlp_from_json(j.at("net"), path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path, 0, std::string("bad energy net file: ") + e.what());
    } catch (const invalid_input& e) {
        throw parse_error(path, 0, std::string("invalid energy net: ") + e.what());
    }
}

void write_grise_solution(const GriseSolution& solution, const Alphabet& alphabet, int p,
                          int max_order, TermKind kind, const std::string& path) {
    save_json(json{{"u", solution.u},
                   {"basis", {{"p", p}, {"q", alphabet.q}, {"L", max_order}, {"kind", kind_name(kind)}}},
                   {"theta", solution.theta},
                   {"objective", solution.objective},
                   {"iterations", solution.iterations},
                   {"converged", solution.converged},
                   {"mode", solution.mode == GriseMode::penalized ? "penalized" : "constrained"},
                   {"penalty", solution.penalty}},
              path);
}

std::pair<GriseSolution, ConditionalModel> read_grise_solution(const std::string& path) {
    const json j = load_json(path);
    try {
        GriseSolution solution;
        solution.u = j.at("u").get<int>();
        solution.theta = j.at("theta").get<std::vector<double>>();
        solution.objective = j.at("objective").get<double>();
        solution.iterations = j.at("iterations").get<int>();
        solution.converged = j.at("converged").get<bool>();
        solution.mode = j.at("mode").get<std::string>() == "constrained" ? GriseMode::constrained
                                                                         : GriseMode::penalized;
        solution.penalty = j.at("penalty").get<double>();
        const json& b = j.at("basis");
        PartialBasis basis = build_partial_basis(
            b.at("p").get<int>(), Alphabet(b.at("q").get<int>()), b.at("L").get<int>(),
            solution.u, kind_from_name(b.at("kind").get<std::string>(), path));
        ConditionalModel model = make_linear_conditional(std::move(basis), solution.theta);
        return {std::move(solution), std::move(model)};
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path, 0, std::string("bad solution file: ") + e.what());
    }
}

namespace {

std::string method_name(ThresholdMethod method) {
    switch (method) {
        case ThresholdMethod::manual: return "manual";
        case ThresholdMethod::rule_of_thumb: return "rule-of-thumb";
        default: return "stddev-outlier";
    }
}

ThresholdMethod method_from_name(const std::string& name, const std::string& path) {
    if (name == "manual") return ThresholdMethod::manual;
    if (name == "rule-of-thumb") return ThresholdMethod::rule_of_thumb;
    if (name == "stddev-outlier") return ThresholdMethod::stddev_outlier;
    throw parse_error(path, 0, "unknown threshold method '" + name + "'");
}

}  // namespace

void write_structure_result(const StructureResult& result, const std::string& path) {
    const int p = result.norms.p;
    json norms = json::array();
    json adjacency = json::array();
    for (int u = 0; u < p; ++u) {
        json norm_row = json::array();
        json adj_row = json::array();
        for (int v = 0; v < p; ++v) {
            norm_row.push_back(result.norms.at(u, v));
            adj_row.push_back(result.edge(u, v) ? 1 : 0);
        }
        norms.push_back(std::move(norm_row));
        adjacency.push_back(std::move(adj_row));
    }
    save_json(json{{"p", p},
                   {"threshold", result.threshold},
                   {"method", method_name(result.method)},
                   {"norms", std::move(norms)},
                   {"adjacency", std::move(adjacency)},
                   {"neighborhoods", result.neighborhoods}},
              path);
}

StructureResult read_structure_result(const std::string& path) {
    const json j = load_json(path);
    try {
        InputWeightNorms norms;
        norms.p = j.at("p").get<int>();
        norms.values.reserve(static_cast<std::size_t>(norms.p) * static_cast<std::size_t>(norms.p));
        for (const json& row : j.at("norms"))
            for (const json& v : row) norms.values.push_back(v.get<double>());
        StructureResult result = reconstruct_graph(
            norms, j.at("threshold").get<double>(),
            method_from_name(j.at("method").get<std::string>(), path));
        return result;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path, 0, std::string("bad structure file: ") + e.what());
    }
}

void write_norms_csv(const InputWeightNorms& norms, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error(path, 0, "cannot open file for writing");
    out.precision(17);
    for (double v : norms.pooled()) out << v << '\n';
}

void write_loss_csv(const std::vector<EpochLog>& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error(path, 0, "cannot open file for writing");
    out.precision(17);
    out << "epoch,train_loss,validation_loss\n";
    for (const EpochLog& log : history) {
        out << log.epoch << ',' << log.train_loss << ',';
        if (std::isfinite(log.validation_loss)) out << log.validation_loss;
        out << '\n';
    }
}

}  // namespace neurise
