#include "spce/model.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "spce/errors.hpp"

namespace spce {

void CyclicSystemSpec::validate() const {
    if (n < 3) throw_data("invalid-rank", "cycle rank must be >= 3, got " + std::to_string(n));
    if (static_cast<int>(contexts.size()) != n)
        throw_data("cycle-broken", "expected " + std::to_string(n) + " contexts, got " +
                                       std::to_string(contexts.size()));

    std::set<std::string> ids;
    for (const auto& c : contexts) {
        if (!ids.insert(c.id).second) throw_data("duplicate-context", "context id '" + c.id + "' repeated");
        if (c.members[0] == c.members[1])
            throw_data("cycle-broken", "context '" + c.id + "' must join two distinct contents");
    }

    std::map<ContentId, int> degree;
    for (const auto& c : contexts) {
        ++degree[c.members[0]];
        ++degree[c.members[1]];
    }
    for (const auto& [content, d] : degree)
        if (d != 2)
            throw_data("content-degree",
                       "content '" + content + "' appears in " + std::to_string(d) + " contexts, expected 2");

    for (int i = 0; i < n; ++i) {
        const auto& a = contexts[static_cast<std::size_t>(i)];
        const auto& b = contexts[static_cast<std::size_t>((i + 1) % n)];
        int shared = 0;
        for (const auto& x : a.members)
            for (const auto& y : b.members)
                if (x == y) ++shared;
        if (shared != 1)
            throw_data("cycle-broken", "contexts '" + a.id + "' and '" + b.id + "' share " +
                                           std::to_string(shared) + " contents, expected 1");
    }
}

int CyclicSystemSpec::context_index(const std::string& id) const {
    for (std::size_t i = 0; i < contexts.size(); ++i)
        if (contexts[i].id == id) return static_cast<int>(i);
    return -1;
}

std::vector<CyclicSystemSpec::ContentSlot> CyclicSystemSpec::content_slots() const {
    std::map<ContentId, std::vector<std::pair<int, int>>> occ;
    std::vector<ContentId> order;
    for (int i = 0; i < static_cast<int>(contexts.size()); ++i) {
        for (int s = 0; s < 2; ++s) {
            const auto& c = contexts[static_cast<std::size_t>(i)].members[static_cast<std::size_t>(s)];
            if (occ.find(c) == occ.end()) order.push_back(c);
            occ[c].emplace_back(i, s);
        }
    }
    std::vector<ContentSlot> out;
    out.reserve(order.size());
    for (const auto& c : order) {
        const auto& v = occ[c];
        if (v.size() != 2) throw_data("content-degree", "content '" + c + "' does not appear exactly twice");
        out.push_back(ContentSlot{c, v[0].first, v[0].second, v[1].first, v[1].second});
    }
    return out;
}

CyclicSystemSpec eprb_system() {
    CyclicSystemSpec s;
    s.n = 4;
    s.contexts = {
        Context{"12", {"A1", "B2"}},
        Context{"11", {"A1", "B1"}},
        Context{"21", {"A2", "B1"}},
        Context{"22", {"A2", "B2"}},
    };
    return s;
}

namespace {
double ratio(double num, std::uint64_t den) { return num / static_cast<double>(den); }
}  // namespace

double ContextCounts::product() const {
    const auto N = total();
    return ratio(static_cast<double>(n_pp) + static_cast<double>(n_mm) - static_cast<double>(n_pm) -
                     static_cast<double>(n_mp),
                 N);
}

double ContextCounts::marginal_first() const {
    const auto N = total();
    return ratio(static_cast<double>(n_pp) + static_cast<double>(n_pm) - static_cast<double>(n_mp) -
                     static_cast<double>(n_mm),
                 N);
}

double ContextCounts::marginal_second() const {
    const auto N = total();
    return ratio(static_cast<double>(n_pp) + static_cast<double>(n_mp) - static_cast<double>(n_pm) -
                     static_cast<double>(n_mm),
                 N);
}

std::vector<Violation> validate_table(const ExpectationTable& table) {
    std::vector<Violation> out;

    try {
        table.spec.validate();
    } catch (const Error& e) {
        out.push_back({e.code(), e.what()});
        return out;  // counts are uninterpretable against a broken spec
    }

    std::map<std::string, int> seen;
    for (const auto& c : table.counts) ++seen[c.context];

    for (const auto& ctx : table.spec.contexts) {
        auto it = seen.find(ctx.id);
        if (it == seen.end()) {
            out.push_back({"missing-context", "no counts for context '" + ctx.id + "'"});
        } else if (it->second > 1) {
            out.push_back({"duplicate-counts", "context '" + ctx.id + "' has " + std::to_string(it->second) +
                                                   " count records"});
        }
    }
    for (const auto& [id, cnt] : seen) {
        (void)cnt;
        if (table.spec.context_index(id) < 0)
            out.push_back({"unknown-context", "counts reference context '" + id + "' absent from the system"});
    }

    // Counts must stay well inside the exactly-representable integer range so
    // count-derived expectations are exact.
    constexpr std::uint64_t cap = 1ULL << 53;
    for (const auto& c : table.counts) {
        if (table.spec.context_index(c.context) < 0) continue;
        if (c.total() == 0) {
            out.push_back({"empty-context", "context '" + c.context + "' has N = 0"});
        } else if (c.total() >= cap || c.n_pp >= cap || c.n_pm >= cap || c.n_mp >= cap || c.n_mm >= cap) {
            out.push_back({"count-overflow", "context '" + c.context + "' counts exceed 2^53"});
        }
    }
    return out;
}

void require_valid(const ExpectationTable& table) {
    const auto v = validate_table(table);
    if (v.empty()) return;
    std::string codes;
    for (const auto& x : v) {
        if (!codes.empty()) codes += ", ";
        codes += x.code;
    }
    throw_data("table-invalid", codes);
}

std::vector<double> cycle_correlations(const ExpectationTable& table) {
    require_valid(table);
    std::vector<double> out(static_cast<std::size_t>(table.spec.n));
    for (const auto& c : table.counts) {
        const int i = table.spec.context_index(c.context);
        out[static_cast<std::size_t>(i)] = c.product();
    }
    return out;
}

}  // namespace spce
