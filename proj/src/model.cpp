#include "neurise/model.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "neurise/rng.hpp"

namespace neurise {

EnergyModel::EnergyModel(int p_, Alphabet alphabet_, std::vector<BasisTerm> terms_)
    : p(p_), alphabet(alphabet_), terms(std::move(terms_)) {
    validate_model(*this);
}

void validate_model(const EnergyModel& model) {
    if (model.p < 1) throw invalid_input("model needs at least one variable");
    std::set<std::tuple<std::vector<int>, int, std::vector<Symbol>>> seen;
    for (const BasisTerm& t : model.terms) {
        if (t.sites.empty()) throw invalid_input("model term with no sites");
        if (!std::is_sorted(t.sites.begin(), t.sites.end()) ||
            std::adjacent_find(t.sites.begin(), t.sites.end()) != t.sites.end())
            throw invalid_input("term sites must be strictly increasing");
        if (t.sites.front() < 0 || t.sites.back() >= model.p)
            throw invalid_input("term site out of range");
        if (t.kind == TermKind::monomial) {
            if (model.alphabet.q != 2) throw invalid_input("monomial terms require q=2");
            if (!t.labels.empty()) throw invalid_input("monomial terms carry no labels");
        } else {
            if (t.labels.size() != t.sites.size())
                throw invalid_input("indicator term needs one label per site");
            for (Symbol s : t.labels)
                if (!model.alphabet.valid(s)) throw invalid_input("indicator label out of range");
        }
        if (!seen.insert({t.sites, static_cast<int>(t.kind), t.labels}).second)
            throw invalid_input("duplicate term (same sites, kind, labels)");
    }
}

double eval_energy(const EnergyModel& model, const Config& config) {
    if (config.size() != static_cast<std::size_t>(model.p))
        throw invalid_input("configuration length does not match model");
    double h = 0.0;
    for (const BasisTerm& t : model.terms) h += t.strength * eval_basis(t, config, model.alphabet);
    return h;
}

EnergyModel gen_one_d_model(int p, int order, const std::vector<double>& theta) {
    if (order < 1 || order > p)
        throw invalid_input("chain model order must be in [1, p]");
    if (theta.size() != static_cast<std::size_t>(order))
        throw invalid_input("need one strength per order");
    std::vector<BasisTerm> terms;
    for (int l = 1; l <= order; ++l) {
        for (int i = 0; i + l <= p; ++i) {
            BasisTerm t;
            t.kind = TermKind::monomial;
            t.strength = theta[static_cast<std::size_t>(l - 1)];
            for (int j = 0; j < l; ++j) t.sites.push_back(i + j);
            terms.push_back(std::move(t));
        }
    }
    return EnergyModel(p, Alphabet(2), std::move(terms));
}

EnergyModel gen_er_pairwise(int p, double edge_probability, double lo, double hi,
                            std::uint64_t seed) {
    if (edge_probability < 0.0 || edge_probability > 1.0)
        throw invalid_input("edge probability must be in [0, 1]");
    if (lo > hi) throw invalid_input("strength interval is empty");
    Rng rng(seed);
    std::vector<BasisTerm> terms;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (!rng.bernoulli(edge_probability)) continue;
            BasisTerm t;
            t.kind = TermKind::monomial;
            t.sites = {i, j};
            t.strength = rng.uniform(lo, hi);
            terms.push_back(std::move(t));
        }
    }
    return EnergyModel(p, Alphabet(2), std::move(terms));
}

EnergyModel gen_hypergraph_model(int p, double lo, double hi, std::uint64_t seed) {
    if (p < 15) throw invalid_input("hypergraph instance needs p >= 15");
    if (lo > hi) throw invalid_input("strength interval is empty");
    Rng rng(seed);
    std::vector<BasisTerm> terms;
    BasisTerm five;
    five.kind = TermKind::monomial;
    five.sites = {0, 2, 4, 6, 8};
    five.strength = 0.5;
    terms.push_back(std::move(five));
    BasisTerm closing;
    closing.kind = TermKind::monomial;
    closing.sites = {0, p - 1};
    closing.strength = rng.uniform(lo, hi);
    terms.push_back(std::move(closing));
    for (int i = 0; i + 1 < p; ++i) {
        BasisTerm t;
        t.kind = TermKind::monomial;
        t.sites = {i, i + 1};
        t.strength = rng.uniform(lo, hi);
        terms.push_back(std::move(t));
    }
    return EnergyModel(p, Alphabet(2), std::move(terms));
}

EnergyModel gen_empty_model(int p, const Alphabet& alphabet) {
    return EnergyModel(p, alphabet, {});
}

}  // namespace neurise
