#include "bnvar/bayesnet.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "bnvar/rng.hpp"
#include "bnvar/types.hpp"

namespace bnvar {

Dag BayesNet::dag() const {
    Dag d;
    for (const Node& node : nodes) d.node_labels.push_back(node.name);
    for (size_t child = 0; child < nodes.size(); ++child)
        for (int parent : nodes[child].parents)
            d.arcs.insert({parent, static_cast<int>(child)});
    return d;
}

void BayesNet::validate() const {
    const int v = node_count();
    for (const Node& node : nodes) {
        if (node.levels.empty())
            throw std::invalid_argument("bayesnet: node '" + node.name + "' has no levels");
        size_t rows = 1;
        for (int p : node.parents) {
            if (p < 0 || p >= v)
                throw std::invalid_argument("bayesnet: parent index out of range");
            rows *= nodes[static_cast<size_t>(p)].levels.size();
        }
        if (node.cpt.size() != rows)
            throw std::invalid_argument("bayesnet: node '" + node.name + "' needs " +
                                        std::to_string(rows) + " cpt rows, has " +
                                        std::to_string(node.cpt.size()));
        for (const auto& row : node.cpt) {
            if (row.size() != node.levels.size())
                throw std::invalid_argument("bayesnet: cpt row width mismatch in '" + node.name + "'");
            double sum = 0;
            for (double p : row) {
                if (p < 0) throw std::invalid_argument("bayesnet: negative probability in '" + node.name + "'");
                sum += p;
            }
            if (std::fabs(sum - 1.0) > 1e-9)
                throw std::invalid_argument("bayesnet: cpt row of '" + node.name +
                                            "' sums to " + std::to_string(sum));
        }
    }
    dag().validate();
}

BayesNet parse_bayesnet(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bayesnet json: ") + e.what());
    }
    if (!doc.contains("nodes") || !doc["nodes"].is_array())
        throw ParseError("bayesnet json: missing 'nodes' array");

    BayesNet bn;
    std::map<std::string, int> index;
    for (const auto& jn : doc["nodes"]) {
        BayesNet::Node node;
        node.name = jn.at("name").get<std::string>();
        if (index.count(node.name)) throw ParseError("bayesnet json: duplicate node '" + node.name + "'");
        index[node.name] = bn.node_count();
        for (const auto& l : jn.at("levels")) node.levels.push_back(l.get<std::string>());
        bn.nodes.push_back(std::move(node));
    }
    for (size_t i = 0; i < bn.nodes.size(); ++i) {
        const auto& jn = doc["nodes"][i];
        if (jn.contains("parents"))
            for (const auto& p : jn["parents"]) {
                auto it = index.find(p.get<std::string>());
                if (it == index.end())
                    throw ParseError("bayesnet json: unknown parent '" + p.get<std::string>() + "'");
                bn.nodes[i].parents.push_back(it->second);
            }
        for (const auto& row : jn.at("cpt"))
            bn.nodes[i].cpt.push_back(row.get<std::vector<double>>());
    }
    bn.validate();
    return bn;
}

BayesNet load_bayesnet(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open bayesnet '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_bayesnet(buffer.str());
}

void save_bayesnet(const BayesNet& bn, const std::string& path) {
    bn.validate();
    nlohmann::json doc;
    doc["nodes"] = nlohmann::json::array();
    for (const auto& node : bn.nodes) {
        nlohmann::json jn;
        jn["name"] = node.name;
        jn["levels"] = node.levels;
        std::vector<std::string> parents;
        for (int p : node.parents) parents.push_back(bn.nodes[static_cast<size_t>(p)].name);
        jn["parents"] = parents;
        jn["cpt"] = node.cpt;
        doc["nodes"].push_back(jn);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write bayesnet '" + path + "'");
    out << doc.dump(2) << '\n';
}

CategoricalDataset forward_sample(const BayesNet& bn, long n, std::uint64_t seed) {
    bn.validate();
    if (n < 1) throw std::invalid_argument("forward_sample: n must be >= 1");
    const int v = bn.node_count();

    // Topological order via Kahn's algorithm on the parent lists.
    std::vector<int> indegree(static_cast<size_t>(v), 0);
    std::vector<std::vector<int>> children(static_cast<size_t>(v));
    for (int i = 0; i < v; ++i)
        for (int p : bn.nodes[static_cast<size_t>(i)].parents) {
            ++indegree[static_cast<size_t>(i)];
            children[static_cast<size_t>(p)].push_back(i);
        }
    std::vector<int> order;
    std::queue<int> ready;
    for (int i = 0; i < v; ++i)
        if (indegree[static_cast<size_t>(i)] == 0) ready.push(i);
    while (!ready.empty()) {
        int node = ready.front();
        ready.pop();
        order.push_back(node);
        for (int c : children[static_cast<size_t>(node)])
            if (--indegree[static_cast<size_t>(c)] == 0) ready.push(c);
    }

    CategoricalDataset data;
    for (int i = 0; i < v; ++i) {
        data.names.push_back(bn.nodes[static_cast<size_t>(i)].name);
        data.levels.push_back(bn.nodes[static_cast<size_t>(i)].levels);
        data.columns.emplace_back(static_cast<size_t>(n));
    }

    SplitMix64 gen(mix_seed(seed, 0));
    std::vector<std::uint8_t> row(static_cast<size_t>(v));
    for (long r = 0; r < n; ++r) {
        for (int node : order) {
            const auto& spec_node = bn.nodes[static_cast<size_t>(node)];
            size_t cpt_row = 0;  // mixed radix, first parent slowest
            for (int p : spec_node.parents)
                cpt_row = cpt_row * bn.nodes[static_cast<size_t>(p)].levels.size() +
                          row[static_cast<size_t>(p)];
            const auto& probs = spec_node.cpt[cpt_row];
            double u = gen.uniform();
            double acc = 0;
            std::uint8_t value = static_cast<std::uint8_t>(probs.size() - 1);
            for (size_t l = 0; l < probs.size(); ++l) {
                acc += probs[l];
                if (u < acc) {
                    value = static_cast<std::uint8_t>(l);
                    break;
                }
            }
            row[static_cast<size_t>(node)] = value;
            data.columns[static_cast<size_t>(node)][static_cast<size_t>(r)] = value;
        }
    }
    return data;
}

} // namespace bnvar
