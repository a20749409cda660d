#include "neurise/basis.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace neurise {

double eval_basis(const BasisTerm& term, const Config& config, const Alphabet& alphabet) {
    if (term.sites.empty()) throw invalid_input("basis term has no sites");
    if (term.kind == TermKind::indicator && term.labels.size() != term.sites.size())
        throw invalid_input("indicator term needs one label per site");
    double value = 1.0;
    for (std::size_t j = 0; j < term.sites.size(); ++j) {
        const int site = term.sites[j];
        if (site < 0 || static_cast<std::size_t>(site) >= config.size())
            throw invalid_input("basis term site " + std::to_string(site) +
                                " outside configuration of length " +
                                std::to_string(config.size()));
        const Symbol sym = config[static_cast<std::size_t>(site)];
        if (!alphabet.valid(sym))
            throw invalid_input("symbol " + std::to_string(int(sym)) + " out of range for q=" +
                                std::to_string(alphabet.q));
        if (term.kind == TermKind::monomial) {
            if (alphabet.q != 2) throw invalid_input("monomial basis requires q=2");
            value *= Alphabet::spin(sym);
        } else {
            value *= alphabet.centered_indicator(term.labels[j], sym);
        }
    }
    return value;
}

namespace {

// Enumerates k-subsets of `others` in lexicographic order; merging the fixed
// center u into each ascending subset preserves lexicographic order of the
// full site vectors.
template <class Visit>
void visit_subsets_with_center(const std::vector<int>& others, int u, int size,
                               const Visit& visit) {
    const int k = size - 1;  // sites besides u
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::vector<int> sites(static_cast<std::size_t>(size));
    const int m = static_cast<int>(others.size());
    if (k > m) return;
    while (true) {
        sites.clear();
        for (int i = 0; i < k; ++i) sites.push_back(others[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
        sites.push_back(u);
        std::sort(sites.begin(), sites.end());
        visit(sites);
        // advance combination
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace

void for_each_partial_term(int p, const Alphabet& alphabet, int max_order, int u, TermKind kind,
                           const std::function<void(const BasisTerm&)>& visit) {
    if (max_order < 1 || max_order > p)
        throw invalid_input("interaction order must be in [1, p], got " +
                            std::to_string(max_order));
    if (u < 0 || u >= p) throw invalid_input("center variable out of range");
    if (kind == TermKind::monomial && alphabet.q != 2)
        throw invalid_input("monomial basis requires q=2");

    std::vector<int> others;
    others.reserve(static_cast<std::size_t>(p - 1));
    for (int v = 0; v < p; ++v)
        if (v != u) others.push_back(v);

    BasisTerm term;
    term.kind = kind;
    const int q = alphabet.q;
    for (int size = 1; size <= max_order; ++size) {
        visit_subsets_with_center(others, u, size, [&](const std::vector<int>& sites) {
            term.sites = sites;
            if (kind == TermKind::monomial) {
                term.labels.clear();
                visit(term);
            } else {
                // odometer over label assignments, lexicographic
                term.labels.assign(sites.size(), 0);
                while (true) {
                    visit(term);
                    int j = static_cast<int>(sites.size()) - 1;
                    while (j >= 0 && term.labels[static_cast<std::size_t>(j)] == q - 1) {
                        term.labels[static_cast<std::size_t>(j)] = 0;
                        --j;
                    }
                    if (j < 0) break;
                    ++term.labels[static_cast<std::size_t>(j)];
                }
            }
        });
    }
}

PartialBasis build_partial_basis(int p, const Alphabet& alphabet, int max_order, int u,
                                 TermKind kind) {
    PartialBasis basis;
    basis.u = u;
    basis.p = p;
    basis.alphabet = alphabet;
    basis.kind = kind;
    basis.max_order = max_order;
    basis.terms.reserve(static_cast<std::size_t>(count_grise_params(p, alphabet.q, max_order, kind)));
    for_each_partial_term(p, alphabet, max_order, u, kind,
                          [&](const BasisTerm& t) { basis.terms.push_back(t); });
    return basis;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        const std::uint64_t factor = static_cast<std::uint64_t>(n - k + i);
        if (result > std::numeric_limits<std::uint64_t>::max() / factor)
            throw invalid_input("binomial overflow");
        result = result * factor / static_cast<std::uint64_t>(i);
    }
    return result;
}

std::uint64_t count_grise_params(int p, int q, int max_order, TermKind kind) {
    if (max_order < 1 || max_order > p)
        throw invalid_input("interaction order must be in [1, p]");
    std::uint64_t total = 0;
    if (kind == TermKind::monomial) {
        for (int k = 0; k < max_order; ++k) total += binomial(p - 1, k);
    } else {
        std::uint64_t qpow = 1;
        for (int k = 1; k <= max_order; ++k) {
            qpow *= static_cast<std::uint64_t>(q);
            total += binomial(p - 1, k - 1) * qpow;
        }
    }
    return total;
}

}  // namespace neurise
