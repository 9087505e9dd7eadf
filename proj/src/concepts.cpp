#include "qpac/concepts.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace qpac {

std::string Classifier::bits() const {
    std::string s(table.size(), '0');
    for (std::size_t i = 0; i < table.size(); ++i) s[i] = table[i] ? '1' : '0';
    return s;
}

Classifier Classifier::from_bits(const std::string& s) {
    std::vector<std::uint8_t> t(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("classifier bitstring must be 0/1");
        t[i] = s[i] == '1' ? 1 : 0;
    }
    return Classifier(std::move(t));
}

void ConceptClass::validate() const {
    if (members.empty()) throw std::invalid_argument("concept class must be non-empty");
    const int n = members.front().domain_size();
    std::set<std::vector<std::uint8_t>> seen;
    for (const auto& c : members) {
        if (c.domain_size() != n) throw std::invalid_argument("concept class members differ in domain size");
        if (!seen.insert(c.table).second) throw std::invalid_argument("concept class contains duplicate tables");
    }
}

double Distribution::total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

void Distribution::validate(double tol) const {
    for (double p : probs)
        if (p < 0.0) throw std::invalid_argument("distribution has negative mass");
    if (std::abs(total() - 1.0) > tol) throw std::invalid_argument("distribution is not normalized");
}

Distribution Distribution::uniform(int n) {
    if (n <= 0) throw std::invalid_argument("uniform distribution needs n >= 1");
    return Distribution(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

LearningParams::LearningParams(double eps, double del) : epsilon(eps), delta(del) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
    if (!(del > 0.0 && del < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
}

double distance(const Classifier& h1, const Classifier& h2, const Distribution& D) {
    if (h1.domain_size() != h2.domain_size() || h1.domain_size() != D.domain_size())
        throw std::invalid_argument("distance: domain mismatch");
    double d = 0.0;
    for (int x = 0; x < h1.domain_size(); ++x)
        if (h1(x) != h2(x)) d += D(x);
    return d;
}

bool is_shattered(const ConceptClass& C, const std::vector<int>& Y) {
    if (Y.size() >= 31) throw std::invalid_argument("is_shattered: subset too large");
    const std::uint32_t want = 1u << Y.size();
    std::unordered_set<std::uint32_t> patterns;
    patterns.reserve(want);
    for (const auto& c : C.members) {
        std::uint32_t pat = 0;
        for (std::size_t i = 0; i < Y.size(); ++i)
            if (c(Y[i])) pat |= 1u << i;
        patterns.insert(pat);
        if (patterns.size() == want) return true;
    }
    return patterns.size() == want;
}

namespace {

std::vector<int> mask_to_subset(std::uint32_t mask) {
    std::vector<int> out;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1u) out.push_back(i);
    return out;
}

}  // namespace

int vc_dimension(const ConceptClass& C) {
    C.validate();
    const int n = C.domain_size();
    if (n > 20) throw std::invalid_argument("vc_dimension: domain too large for exhaustive search");

    // Levelwise search. A set of size k can only be shattered if all its
    // (k-1)-subsets are, so each level is grown from the previous one.
    std::unordered_set<std::uint32_t> shattered_prev = {0u};  // empty set, always shattered
    int dim = 0;
    for (int k = 1; k <= n; ++k) {
        std::unordered_set<std::uint32_t> shattered_k;
        std::unordered_set<std::uint32_t> tried;
        for (std::uint32_t base : shattered_prev) {
            for (int e = 0; e < n; ++e) {
                const std::uint32_t cand = base | (1u << e);
                if (cand == base || !tried.insert(cand).second) continue;
                bool subsets_ok = true;
                for (int i = 0; i < n && subsets_ok; ++i)
                    if (cand & (1u << i)) subsets_ok = shattered_prev.count(cand & ~(1u << i)) > 0;
                if (!subsets_ok) continue;
                if (is_shattered(C, mask_to_subset(cand))) shattered_k.insert(cand);
            }
        }
        if (shattered_k.empty()) break;
        dim = k;
        shattered_prev = std::move(shattered_k);
    }
    return dim;
}

int vc_dimension_naive(const ConceptClass& C) {
    C.validate();
    const int n = C.domain_size();
    if (n > 20) throw std::invalid_argument("vc_dimension_naive: domain too large");
    int dim = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const auto Y = mask_to_subset(mask);
        if (static_cast<int>(Y.size()) > dim && is_shattered(C, Y)) dim = static_cast<int>(Y.size());
    }
    return dim;
}

Distribution perturbed_delta(int domain_size, const std::vector<int>& Z, int x0, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 0.25)) throw std::invalid_argument("perturbed_delta: epsilon must lie in (0, 1/4]");
    if (Z.size() < 2) throw std::invalid_argument("perturbed_delta: |Z| >= 2 required");
    if (std::find(Z.begin(), Z.end(), x0) == Z.end()) throw std::invalid_argument("perturbed_delta: x0 must lie in Z");
    std::vector<double> p(static_cast<std::size_t>(domain_size), 0.0);
    const double d = static_cast<double>(Z.size() - 1);
    for (int z : Z) {
        if (z < 0 || z >= domain_size) throw std::invalid_argument("perturbed_delta: Z outside domain");
        p[static_cast<std::size_t>(z)] = z == x0 ? 1.0 - 4.0 * epsilon : 4.0 * epsilon / d;
    }
    return Distribution(std::move(p));
}

ConceptClass junta_class(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("junta_class: need 0 <= k <= n");
    if (n > 12 || (1 << n) > 4096) throw std::invalid_argument("junta_class: domain too large");
    // choose(n,k) * 2^(2^k) candidate tables before deduplication
    if (k > 4) throw std::invalid_argument("junta_class: 2^(2^k) table count too large");
    double bound = std::pow(2.0, static_cast<double>(1 << k));
    for (int i = 0; i < k; ++i) bound *= static_cast<double>(n - i) / (i + 1);
    if (bound > 2e6) throw std::invalid_argument("junta_class: class too large to enumerate");

    const int domain = 1 << n;
    std::set<std::vector<std::uint8_t>> tables;

    // Enumerate k-element coordinate subsets; "at most k" relevant coordinates
    // is covered because any function of fewer coordinates also arises from a
    // k-superset of them.
    std::vector<int> coords(static_cast<std::size_t>(k));
    auto emit = [&]() {
        const std::uint64_t n_subfuncs = 1ull << (1 << k);
        for (std::uint64_t g = 0; g < n_subfuncs; ++g) {
            std::vector<std::uint8_t> table(static_cast<std::size_t>(domain));
            for (int x = 0; x < domain; ++x) {
                int key = 0;
                for (int i = 0; i < k; ++i)
                    if (x & (1 << coords[static_cast<std::size_t>(i)])) key |= 1 << i;
                table[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>((g >> key) & 1ull);
            }
            tables.insert(std::move(table));
        }
    };
    if (k == 0) {
        emit();
    } else {
        // iterative enumeration of combinations
        for (int i = 0; i < k; ++i) coords[static_cast<std::size_t>(i)] = i;
        while (true) {
            emit();
            int i = k - 1;
            while (i >= 0 && coords[static_cast<std::size_t>(i)] == n - k + i) --i;
            if (i < 0) break;
            ++coords[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j) coords[static_cast<std::size_t>(j)] = coords[static_cast<std::size_t>(j - 1)] + 1;
        }
    }

    ConceptClass C;
    C.members.reserve(tables.size());
    for (auto& t : tables) C.members.emplace_back(t);
    return C;
}

double junta_vc_bound(int n, int k) {
    const double e = std::exp(1.0);
    const double kk = std::max(1, k);  // k=0 would divide by zero; bound is trivial there
    return k * std::log2(e * n / kk) + std::pow(2.0, k);
}

int sample(const Distribution& D, SeededRng& rng) {
    D.validate();
    const double u = rng.next_double();
    double acc = 0.0;
    const int n = D.domain_size();
    for (int x = 0; x < n; ++x) {
        acc += D(x);
        if (u < acc) return x;
    }
    // u landed in the rounding slack at the top of the CDF
    for (int x = n - 1; x >= 0; --x)
        if (D(x) > 0.0) return x;
    return n - 1;
}

std::string concept_class_to_json(const ConceptClass& C, const Distribution* D) {
    C.validate();
    nlohmann::ordered_json j;
    j["domain_size"] = C.domain_size();
    auto& arr = j["concepts"] = nlohmann::ordered_json::array();
    for (const auto& c : C.members) arr.push_back(c.bits());
    if (D != nullptr) {
        D->validate();
        if (D->domain_size() != C.domain_size())
            throw std::invalid_argument("concept_class_to_json: distribution domain mismatch");
        j["distribution"] = D->probs;
    }
    return j.dump();
}

void concept_class_from_json(const std::string& text, ConceptClass& C, Distribution* D) {
    const auto j = nlohmann::json::parse(text);
    const int n = j.at("domain_size").get<int>();
    C.members.clear();
    for (const auto& s : j.at("concepts")) {
        auto c = Classifier::from_bits(s.get<std::string>());
        if (c.domain_size() != n) throw std::invalid_argument("concept bitstring length mismatch");
        C.members.push_back(std::move(c));
    }
    C.validate();
    if (D != nullptr) {
        if (!j.contains("distribution")) throw std::invalid_argument("missing distribution");
        *D = Distribution(j.at("distribution").get<std::vector<double>>());
        if (D->domain_size() != n) throw std::invalid_argument("distribution length mismatch");
        D->validate();
    }
}

}  // namespace qpac
