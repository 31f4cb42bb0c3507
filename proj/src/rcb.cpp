#include "oclab/rcb.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "oclab/errors.hpp"

namespace oclab::rcb {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kDomains = {
    "genealogy", "profession", "arts", "science",
    "history",   "music",      "geopolitics", "sports",
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return j;
}

std::string require_string(const json& j, const std::string& key,
                           const std::string& where) {
    if (!j.contains(key) || !j[key].is_string())
        throw FormatError(where + ": missing string field '" + key + "'");
    return j[key].get<std::string>();
}

EdgeSlot parse_slot(const json& j, const std::string& where) {
    return {require_string(j, "relation", where), require_string(j, "subject", where),
            require_string(j, "object", where)};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// Verb phrase of the canonical subject-first template "{s} <vp>.".
std::string verb_phrase(const RelationDef& rel) {
    const std::string& t0 = rel.statement_templates.at(0);
    if (t0.rfind("{s} ", 0) != 0 || t0.back() != '.')
        throw ConfigError("relation " + rel.name +
                          ": statement template 0 must have the form \"{s} <vp>.\"");
    return t0.substr(4, t0.size() - 5);
}

void check_relation(const RelationDef& rel) {
    if (rel.statement_templates.size() < 2)
        throw ConfigError("relation " + rel.name + ": needs >= 2 statement templates");
    if (std::find(kDomains.begin(), kDomains.end(), rel.domain) == kDomains.end())
        throw ConfigError("relation " + rel.name + ": unknown domain " + rel.domain);
    for (const auto& t : rel.statement_templates) {
        if (!contains(t, "{s}") || !contains(t, "{o}"))
            throw ConfigError("relation " + rel.name +
                              ": statement template must mention {s} and {o}: " + t);
    }
    verb_phrase(rel);  // throws when template 0 is not aggregatable
    if (!contains(rel.query_template, "{s}") || contains(rel.query_template, "{o}"))
        throw ConfigError("relation " + rel.name +
                          ": query template must mention {s} and not {o}");
}

std::vector<std::string> placeholder_order(const Typology& t) {
    std::vector<std::string> order;
    for (const auto& e : t.edges) {
        for (const auto& ph : {e.subject, e.object}) {
            if (std::find(order.begin(), order.end(), ph) == order.end())
                order.push_back(ph);
        }
    }
    return order;
}

// Tries to match every premise of the rule onto a distinct non-excluded edge
// with a consistent variable binding; returns true and the binding on success.
bool match_premises(const std::vector<EdgeSlot>& premises, size_t pi,
                    const std::vector<EdgeSlot>& edges, std::vector<bool>& used,
                    size_t excluded, std::map<std::string, std::string>& binding) {
    if (pi == premises.size()) return true;
    const EdgeSlot& p = premises[pi];
    for (size_t ei = 0; ei < edges.size(); ++ei) {
        if (used[ei] || ei == excluded || edges[ei].relation != p.relation) continue;
        std::vector<std::pair<std::string, std::string>> added;
        bool ok = true;
        for (const auto& [var, ph] : {std::pair{p.subject, edges[ei].subject},
                                      std::pair{p.object, edges[ei].object}}) {
            auto it = binding.find(var);
            if (it == binding.end()) {
                binding.emplace(var, ph);
                added.emplace_back(var, ph);
            } else if (it->second != ph) {
                ok = false;
                break;
            }
        }
        if (ok) {
            used[ei] = true;
            if (match_premises(premises, pi + 1, edges, used, excluded, binding))
                return true;
            used[ei] = false;
        }
        for (const auto& [var, ph] : added) {
            (void)ph;
            binding.erase(var);
        }
    }
    return false;
}

// Edge indices the rule can derive from the remaining edges of the typology.
std::vector<size_t> derivable_edges(const Typology& t, const EntailmentRule& rule) {
    std::vector<size_t> out;
    for (size_t ci = 0; ci < t.edges.size(); ++ci) {
        const EdgeSlot& cand = t.edges[ci];
        if (cand.relation != rule.conclusion.relation) continue;
        std::map<std::string, std::string> binding = {
            {rule.conclusion.subject, cand.subject},
            {rule.conclusion.object, cand.object},
        };
        std::vector<bool> used(t.edges.size(), false);
        if (match_premises(rule.premises, 0, t.edges, used, ci, binding))
            out.push_back(ci);
    }
    return out;
}

Triple realize(const EdgeSlot& slot, const std::map<std::string, std::string>& binding) {
    return {slot.relation, binding.at(slot.subject), binding.at(slot.object)};
}

std::string mask_token(size_t index) {
    return "[E" + std::to_string(index + 1) + "]";
}

// Ordered entity -> replacement map, indexed by first appearance in text.
std::vector<std::pair<std::string, std::string>> mention_map(
    const RcbInstance& inst, bool categories, const Bank* bank) {
    std::map<std::string, std::string> cat_of;
    if (categories) {
        const Typology* typ = nullptr;
        for (const auto& t : bank->typologies)
            if (t.id == inst.typology_id) typ = &t;
        if (typ == nullptr)
            throw ConfigError("unknown typology " + inst.typology_id);
        auto cats = placeholder_categories(*typ, *bank);
        for (const auto& [ph, entity] : inst.binding) cat_of[entity] = cats.at(ph);
    }
    std::vector<std::pair<size_t, std::string>> firsts;
    for (const auto& [ph, entity] : inst.binding) {
        (void)ph;
        size_t pos = inst.paragraph.find(entity);
        if (pos == std::string::npos)
            throw GenError("entity not found in paragraph: " + entity);
        firsts.emplace_back(pos, entity);
    }
    std::sort(firsts.begin(), firsts.end());
    std::vector<std::pair<std::string, std::string>> out;
    for (size_t i = 0; i < firsts.size(); ++i) {
        const std::string& entity = firsts[i].second;
        out.emplace_back(entity, categories ? cat_of.at(entity) : mask_token(i));
    }
    return out;
}

std::string replace_all(std::string text,
                        const std::vector<std::pair<std::string, std::string>>& subs) {
    // longest entity first so no name is clobbered as a substring of another
    auto order = subs;
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return a.first.size() > b.first.size();
    });
    for (const auto& [from, to] : order) {
        size_t pos = 0;
        while ((pos = text.find(from, pos)) != std::string::npos) {
            text.replace(pos, from.size(), to);
            pos += to.size();
        }
    }
    return text;
}

std::string domain_display(const std::string& domain) {
    std::string out = domain;
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

}  // namespace

const RelationDef& Bank::relation(const std::string& name) const {
    for (const auto& r : relations)
        if (r.name == name) return r;
    throw ConfigError("unknown relation " + name);
}

const EntailmentRule& Bank::rule(const std::string& id) const {
    for (const auto& r : rules)
        if (r.id == id) return r;
    throw ConfigError("unknown rule " + id);
}

std::vector<RelationDef> load_relations(const std::string& path) {
    json j = read_json_file(path);
    if (!j.contains("relations") || !j["relations"].is_array())
        throw FormatError(path + ": missing 'relations' array");
    std::vector<RelationDef> out;
    std::set<std::string> seen;
    for (const auto& r : j["relations"]) {
        RelationDef rel;
        rel.name = require_string(r, "name", path);
        rel.domain = require_string(r, "domain", path);
        rel.subject_category = require_string(r, "subject_category", path);
        rel.object_category = require_string(r, "object_category", path);
        if (!r.contains("statement_templates") || !r["statement_templates"].is_array())
            throw FormatError(path + ": relation " + rel.name +
                              " missing statement_templates");
        for (const auto& t : r["statement_templates"])
            rel.statement_templates.push_back(t.get<std::string>());
        rel.query_template = require_string(r, "query_template", path);
        check_relation(rel);
        if (!seen.insert(rel.name).second)
            throw ConfigError(path + ": duplicate relation " + rel.name);
        out.push_back(std::move(rel));
    }
    return out;
}

std::vector<EntailmentRule> load_rules(const std::string& path) {
    json j = read_json_file(path);
    if (!j.contains("rules") || !j["rules"].is_array())
        throw FormatError(path + ": missing 'rules' array");
    std::vector<EntailmentRule> out;
    std::set<std::string> seen;
    for (const auto& r : j["rules"]) {
        EntailmentRule rule;
        rule.id = require_string(r, "id", path);
        if (!r.contains("premises") || !r["premises"].is_array() ||
            r["premises"].empty())
            throw FormatError(path + ": rule " + rule.id + " missing premises");
        for (const auto& p : r["premises"])
            rule.premises.push_back(parse_slot(p, path + " rule " + rule.id));
        if (!r.contains("conclusion"))
            throw FormatError(path + ": rule " + rule.id + " missing conclusion");
        rule.conclusion = parse_slot(r["conclusion"], path + " rule " + rule.id);
        std::set<std::string> premise_vars;
        for (const auto& p : rule.premises) {
            premise_vars.insert(p.subject);
            premise_vars.insert(p.object);
        }
        if (!premise_vars.count(rule.conclusion.subject) ||
            !premise_vars.count(rule.conclusion.object))
            throw ConfigError(path + ": rule " + rule.id +
                              ": conclusion variables must appear in premises");
        if (!seen.insert(rule.id).second)
            throw ConfigError(path + ": duplicate rule " + rule.id);
        out.push_back(std::move(rule));
    }
    return out;
}

std::vector<Typology> load_typologies(const std::string& path) {
    json j = read_json_file(path);
    if (!j.contains("typologies") || !j["typologies"].is_array())
        throw FormatError(path + ": missing 'typologies' array");
    std::vector<Typology> out;
    std::set<std::string> seen;
    for (const auto& t : j["typologies"]) {
        Typology typ;
        typ.id = require_string(t, "id", path);
        typ.domain = require_string(t, "domain", path);
        if (!t.contains("count") || !t["count"].is_number_integer())
            throw FormatError(path + ": typology " + typ.id + " missing count");
        typ.count = t["count"].get<int>();
        if (typ.count < 0)
            throw ConfigError(path + ": typology " + typ.id + " negative count");
        std::string policy = require_string(t, "policy", path);
        if (policy == "entailed") {
            typ.policy = HeldoutPolicy::kEntailed;
            typ.rule_id = require_string(t, "rule", path + " typology " + typ.id);
        } else if (policy == "random_cycle") {
            typ.policy = HeldoutPolicy::kRandomCycleEdge;
        } else {
            throw ConfigError(path + ": typology " + typ.id + " unknown policy " +
                              policy);
        }
        if (!t.contains("edges") || !t["edges"].is_array())
            throw FormatError(path + ": typology " + typ.id + " missing edges");
        for (const auto& e : t["edges"])
            typ.edges.push_back(parse_slot(e, path + " typology " + typ.id));
        if (t.contains("anchors")) {
            for (const auto& [ph, name] : t["anchors"].items())
                typ.anchors[ph] = name.get<std::string>();
        }
        if (!seen.insert(typ.id).second)
            throw ConfigError(path + ": duplicate typology " + typ.id);
        out.push_back(std::move(typ));
    }
    return out;
}

EntityPool load_pool(const std::string& path) {
    json j = read_json_file(path);
    if (!j.contains("categories") || !j["categories"].is_object())
        throw FormatError(path + ": missing 'categories' object");
    EntityPool pool;
    for (const auto& [cat, names] : j["categories"].items()) {
        if (!names.is_array() || names.empty())
            throw FormatError(path + ": category " + cat + " must be a non-empty array");
        std::set<std::string> seen;
        for (const auto& n : names) {
            std::string name = n.get<std::string>();
            if (!seen.insert(name).second)
                throw ConfigError(path + ": duplicate entity '" + name + "' in " + cat);
            pool.categories[cat].push_back(std::move(name));
        }
    }
    return pool;
}

Bank load_bank(const std::string& dir) {
    Bank bank;
    bank.relations = load_relations(dir + "/relations.json");
    bank.rules = load_rules(dir + "/rules.json");
    bank.typologies = load_typologies(dir + "/typologies.json");
    bank.pool = load_pool(dir + "/entity_pool.json");
    for (const auto& rel : bank.relations) {
        for (const auto& cat : {rel.subject_category, rel.object_category}) {
            auto it = bank.pool.categories.find(cat);
            if (it == bank.pool.categories.end() || it->second.empty())
                throw ConfigError("pool has no entities for category '" + cat +
                                  "' referenced by relation " + rel.name);
        }
    }
    return bank;
}

std::string fill_template(std::string tmpl, const std::string& subject,
                          const std::string& object) {
    std::vector<std::pair<std::string, std::string>> subs = {{"{s}", subject}};
    if (!object.empty()) subs.emplace_back("{o}", object);
    for (const auto& [from, to] : subs) {
        size_t pos = 0;
        while ((pos = tmpl.find(from, pos)) != std::string::npos) {
            tmpl.replace(pos, from.size(), to);
            pos += to.size();
        }
    }
    return tmpl;
}

std::pair<std::string, std::string> edge_query(const Triple& edge, const Bank& bank) {
    const RelationDef& rel = bank.relation(edge.relation);
    return {fill_template(rel.query_template, edge.subject), edge.object};
}

std::map<std::string, std::string> placeholder_categories(const Typology& t,
                                                          const Bank& bank) {
    std::map<std::string, std::string> cats;
    for (const auto& e : t.edges) {
        const RelationDef& rel = bank.relation(e.relation);
        for (const auto& [ph, cat] : {std::pair{e.subject, rel.subject_category},
                                      std::pair{e.object, rel.object_category}}) {
            auto it = cats.find(ph);
            if (it == cats.end()) {
                cats.emplace(ph, cat);
            } else if (it->second != cat) {
                throw ConfigError("typology " + t.id + ": placeholder " + ph +
                                  " used as both " + it->second + " and " + cat);
            }
        }
    }
    return cats;
}

std::vector<size_t> cycle_edge_indices(const Typology& t) {
    // an edge lies on an undirected cycle iff its endpoints stay connected
    // after removing it (parallel edges keep each other cyclic)
    std::vector<size_t> out;
    for (size_t skip = 0; skip < t.edges.size(); ++skip) {
        std::map<std::string, std::vector<std::string>> adj;
        for (size_t i = 0; i < t.edges.size(); ++i) {
            if (i == skip) continue;
            adj[t.edges[i].subject].push_back(t.edges[i].object);
            adj[t.edges[i].object].push_back(t.edges[i].subject);
        }
        const std::string& a = t.edges[skip].subject;
        const std::string& b = t.edges[skip].object;
        if (a == b) {  // self-loop is trivially a cycle
            out.push_back(skip);
            continue;
        }
        std::set<std::string> seen = {a};
        std::vector<std::string> stack = {a};
        while (!stack.empty()) {
            std::string u = stack.back();
            stack.pop_back();
            for (const auto& v : adj[u]) {
                if (seen.insert(v).second) stack.push_back(v);
            }
        }
        if (seen.count(b)) out.push_back(skip);
    }
    return out;
}

ValidationReport validate_typology(const Typology& t, const Bank& bank) {
    ValidationReport rep;
    auto add = [&](const std::string& v) { rep.violations.push_back(t.id + ": " + v); };

    if (t.edges.size() < 3) add("fewer than 3 edge slots");
    if (std::find(kDomains.begin(), kDomains.end(), t.domain) == kDomains.end())
        add("unknown domain " + t.domain);

    std::map<std::string, std::string> cats;
    bool relations_ok = true;
    for (const auto& e : t.edges) {
        bool found = false;
        for (const auto& r : bank.relations)
            if (r.name == e.relation) found = true;
        if (!found) {
            add("unknown relation " + e.relation);
            relations_ok = false;
        }
    }
    if (relations_ok) {
        try {
            cats = placeholder_categories(t, bank);
        } catch (const ConfigError& e) {
            add(e.what());
            relations_ok = false;
        }
    }

    // connectivity over the undirected placeholder graph
    if (!t.edges.empty()) {
        std::map<std::string, std::vector<std::string>> adj;
        std::set<std::string> all;
        for (const auto& e : t.edges) {
            adj[e.subject].push_back(e.object);
            adj[e.object].push_back(e.subject);
            all.insert(e.subject);
            all.insert(e.object);
        }
        std::set<std::string> seen = {*all.begin()};
        std::vector<std::string> stack = {*all.begin()};
        while (!stack.empty()) {
            std::string u = stack.back();
            stack.pop_back();
            for (const auto& v : adj[u])
                if (seen.insert(v).second) stack.push_back(v);
        }
        if (seen.size() != all.size()) add("placeholder graph not connected");
    }

    if (cycle_edge_indices(t).empty()) add("no undirected cycle");

    for (const auto& [ph, entity] : t.anchors) {
        bool ph_used = false;
        for (const auto& e : t.edges)
            if (e.subject == ph || e.object == ph) ph_used = true;
        if (!ph_used) {
            add("anchor placeholder " + ph + " unused");
            continue;
        }
        if (relations_ok) {
            const auto& cat = cats.at(ph);
            auto it = bank.pool.categories.find(cat);
            bool in_pool = it != bank.pool.categories.end() &&
                           std::find(it->second.begin(), it->second.end(), entity) !=
                               it->second.end();
            if (!in_pool)
                add("anchor entity '" + entity + "' not in pool category " + cat);
        }
    }
    {
        std::set<std::string> names;
        for (const auto& [ph, entity] : t.anchors) {
            (void)ph;
            if (!names.insert(entity).second) add("duplicate anchor entity " + entity);
        }
    }

    if (t.policy == HeldoutPolicy::kEntailed && relations_ok) {
        bool rule_found = false;
        for (const auto& r : bank.rules)
            if (r.id == t.rule_id) rule_found = true;
        if (!rule_found) {
            add("unknown rule " + t.rule_id);
        } else {
            auto idxs = derivable_edges(t, bank.rule(t.rule_id));
            if (idxs.empty())
                add("rule " + t.rule_id + " does not derive any edge");
            else if (idxs.size() > 1)
                add("rule " + t.rule_id + " derives multiple edges (ambiguous held-out)");
        }
    }
    return rep;
}

size_t select_heldout(const Typology& t, const Bank& bank, Rng& rng) {
    if (t.policy == HeldoutPolicy::kEntailed) {
        auto idxs = derivable_edges(t, bank.rule(t.rule_id));
        if (idxs.size() != 1)
            throw GenError("typology " + t.id + ": rule must derive exactly one edge");
        return idxs[0];
    }
    auto cyc = cycle_edge_indices(t);
    if (cyc.empty()) throw GenError("typology " + t.id + ": no cycle edge to hold out");
    return cyc[rng.below(cyc.size())];
}

PoolDraw::PoolDraw(std::map<std::string, std::vector<std::string>> names)
    : names_(std::move(names)) {}

std::string PoolDraw::draw(const std::string& category) {
    auto it = names_.find(category);
    size_t& cursor = next_[category];
    if (it == names_.end() || cursor >= it->second.size())
        throw GenError("entity pool exhausted for category " + category);
    return it->second[cursor++];
}

size_t PoolDraw::remaining(const std::string& category) const {
    auto it = names_.find(category);
    if (it == names_.end()) return 0;
    auto n = next_.find(category);
    size_t used = n == next_.end() ? 0 : n->second;
    return it->second.size() - used;
}

PoolDraw make_pool_draw(const EntityPool& pool,
                        const std::vector<std::string>& reserved, Rng& rng) {
    std::set<std::string> skip(reserved.begin(), reserved.end());
    std::map<std::string, std::vector<std::string>> names;
    for (const auto& [cat, list] : pool.categories) {
        std::vector<std::string> keep;
        for (const auto& n : list)
            if (!skip.count(n)) keep.push_back(n);
        rng.shuffle(keep);
        names[cat] = std::move(keep);
    }
    return PoolDraw(std::move(names));
}

std::vector<RcbInstance> instantiate(const Typology& t, const Bank& bank, int count,
                                     PoolDraw& draw, Rng& rng) {
    auto cats = placeholder_categories(t, bank);
    auto order = placeholder_order(t);
    std::vector<RcbInstance> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        RcbInstance inst;
        size_t held = select_heldout(t, bank, rng);
        inst.binding = t.anchors;
        for (const auto& ph : order) {
            if (!inst.binding.count(ph)) inst.binding[ph] = draw.draw(cats.at(ph));
        }
        std::set<std::string> distinct;
        for (const auto& [ph, entity] : inst.binding) {
            (void)ph;
            if (!distinct.insert(entity).second)
                throw GenError("typology " + t.id + ": duplicate entity in binding: " +
                               entity);
        }
        for (size_t e = 0; e < t.edges.size(); ++e) {
            Triple tr = realize(t.edges[e], inst.binding);
            if (e == held)
                inst.unknown_edge = tr;
            else
                inst.known_edges.push_back(tr);
        }
        std::string idx = std::to_string(i);
        inst.id = t.id + "_" + std::string(3 - std::min<size_t>(3, idx.size()), '0') + idx;
        inst.domain = t.domain;
        inst.typology_id = t.id;
        inst.derivable = t.policy == HeldoutPolicy::kEntailed;
        out.push_back(std::move(inst));
    }
    return out;
}

std::vector<Sentence> serialize_sentences(const RcbInstance& inst, const Bank& bank,
                                          Rng& rng) {
    std::vector<Sentence> out;
    size_t i = 0;
    while (i < inst.known_edges.size()) {
        size_t j = i + 1;
        while (j < inst.known_edges.size() &&
               inst.known_edges[j].subject == inst.known_edges[i].subject)
            ++j;
        if (j - i == 1) {
            const Triple& e = inst.known_edges[i];
            const RelationDef& rel = bank.relation(e.relation);
            size_t tidx = rng.below(rel.statement_templates.size());
            out.push_back(
                {fill_template(rel.statement_templates[tidx], e.subject, e.object), 1});
        } else {
            // aggregation: shared subject stated once, verb phrases joined
            std::string text = inst.known_edges[i].subject + " ";
            for (size_t k = i; k < j; ++k) {
                const Triple& e = inst.known_edges[k];
                const RelationDef& rel = bank.relation(e.relation);
                if (k > i) text += " and ";
                text += fill_template(verb_phrase(rel), e.subject, e.object);
            }
            text += ".";
            out.push_back({text, static_cast<int>(j - i)});
        }
        i = j;
    }
    return out;
}

std::string serialize(const RcbInstance& inst, const Bank& bank, Rng& rng) {
    auto sentences = serialize_sentences(inst, bank, rng);
    std::string text;
    for (size_t i = 0; i < sentences.size(); ++i) {
        if (i > 0) text += " ";
        text += sentences[i].text;
    }
    return text;
}

std::string abstract_mask(const RcbInstance& inst) {
    return replace_all(inst.paragraph, mention_map(inst, false, nullptr));
}

std::string abstract_category(const RcbInstance& inst, const Bank& bank) {
    return replace_all(inst.paragraph, mention_map(inst, true, &bank));
}

std::string abstract_random(const RcbInstance& inst,
                            const std::vector<MaskedSentence>& corpus, Rng& rng) {
    int remaining = static_cast<int>(inst.known_edges.size());
    std::vector<bool> taken(corpus.size(), false);
    std::vector<size_t> picked;
    while (remaining > 0) {
        std::vector<size_t> feasible;
        for (size_t i = 0; i < corpus.size(); ++i) {
            if (!taken[i] && corpus[i].instance_id != inst.id &&
                corpus[i].n_edges <= remaining)
                feasible.push_back(i);
        }
        if (feasible.empty())
            throw GenError("random abstraction: cannot reach relation count for " +
                           inst.id);
        size_t pick = feasible[rng.below(feasible.size())];
        taken[pick] = true;
        picked.push_back(pick);
        remaining -= corpus[pick].n_edges;
    }
    std::string text;
    for (size_t i = 0; i < picked.size(); ++i) {
        if (i > 0) text += " ";
        text += corpus[picked[i]].text;
    }
    return text;
}

double DomainStats::derivable_pct() const {
    return instances == 0 ? 0.0 : 100.0 * derivable / instances;
}

Dataset build_dataset(const Bank& bank, const BuildConfig& cfg) {
    std::vector<const Typology*> selected;
    for (const auto& t : bank.typologies) {
        if (cfg.only.empty() ||
            std::find(cfg.only.begin(), cfg.only.end(), t.id) != cfg.only.end())
            selected.push_back(&t);
    }
    if (!cfg.only.empty() && selected.size() != cfg.only.size())
        throw GenError("config names unknown typologies");
    if (selected.empty()) throw GenError("no typologies selected");

    std::string offenders;
    for (const Typology* t : selected) {
        auto rep = validate_typology(*t, bank);
        for (const auto& v : rep.violations) offenders += v + "; ";
    }
    if (!offenders.empty()) throw GenError("invalid typologies: " + offenders);

    auto count_of = [&](const Typology& t) {
        auto it = cfg.count_overrides.find(t.id);
        return it == cfg.count_overrides.end() ? t.count : it->second;
    };

    // shuffle the pool once, then hand each typology a disjoint slice so
    // per-typology generation is order-independent
    std::vector<std::string> reserved;
    for (const Typology* t : selected)
        for (const auto& [ph, entity] : t->anchors) {
            (void)ph;
            reserved.push_back(entity);
        }
    Rng pool_rng = Rng::derive(cfg.seed, "rcb_pool");
    PoolDraw shared = make_pool_draw(bank.pool, reserved, pool_rng);

    std::vector<PoolDraw> slices;
    for (const Typology* t : selected) {
        auto cats = placeholder_categories(*t, bank);
        std::map<std::string, int> need;
        for (const auto& [ph, cat] : cats)
            if (!t->anchors.count(ph)) need[cat] += count_of(*t);
        std::map<std::string, std::vector<std::string>> slice;
        for (const auto& [cat, n] : need) {
            auto& list = slice[cat];
            for (int i = 0; i < n; ++i) list.push_back(shared.draw(cat));
        }
        slices.emplace_back(std::move(slice));
    }

    Dataset ds;
    std::vector<std::vector<Sentence>> sentences;  // per instance, for the corpus
    for (size_t si = 0; si < selected.size(); ++si) {
        const Typology& t = *selected[si];
        Rng rng = Rng::derive(cfg.seed, "rcb_typ:" + t.id);
        auto insts = instantiate(t, bank, count_of(t), slices[si], rng);
        for (auto& inst : insts) {
            auto sents = serialize_sentences(inst, bank, rng);
            std::string paragraph;
            for (size_t i = 0; i < sents.size(); ++i) {
                if (i > 0) paragraph += " ";
                paragraph += sents[i].text;
            }
            inst.paragraph = std::move(paragraph);
            inst.abstract_mask = abstract_mask(inst);
            inst.abstract_category = abstract_category(inst, bank);
            sentences.push_back(std::move(sents));
            ds.instances.push_back(std::move(inst));
        }
    }

    // masked sentence corpus: the per-sentence pieces of every masked paragraph
    std::vector<MaskedSentence> corpus;
    for (size_t i = 0; i < ds.instances.size(); ++i) {
        const RcbInstance& inst = ds.instances[i];
        auto subs = mention_map(inst, false, nullptr);
        for (const auto& s : sentences[i])
            corpus.push_back({replace_all(s.text, subs), s.n_edges, inst.id});
    }
    for (auto& inst : ds.instances) {
        Rng rng = Rng::derive(cfg.seed, "rcb_rand:" + inst.id);
        inst.abstract_random = abstract_random(inst, corpus, rng);
    }

    // leakage freedom: no unknown triple is ever a known triple, and no
    // unknown edge's surface form appears in its instance's texts
    auto key = [](const Triple& t) {
        return t.relation + "\x1f" + t.subject + "\x1f" + t.object;
    };
    std::set<std::string> known_keys, unknown_keys;
    for (const auto& inst : ds.instances) {
        for (const auto& e : inst.known_edges) known_keys.insert(key(e));
        unknown_keys.insert(key(inst.unknown_edge));
    }
    for (const auto& k : unknown_keys) {
        if (known_keys.count(k))
            throw GenError("leakage: unknown edge also appears as known: " + k);
    }
    for (const auto& inst : ds.instances) {
        const RelationDef& rel = bank.relation(inst.unknown_edge.relation);
        for (const auto& tmpl : rel.statement_templates) {
            std::string surface =
                fill_template(tmpl, inst.unknown_edge.subject, inst.unknown_edge.object);
            for (const std::string* text :
                 {&inst.paragraph, &inst.abstract_mask, &inst.abstract_category,
                  &inst.abstract_random}) {
                if (contains(*text, surface))
                    throw GenError("leakage: unknown edge surfaced in " + inst.id);
            }
        }
    }

    std::map<std::string, DomainStats> per_domain;
    std::map<std::string, std::set<std::string>> dom_known, dom_unknown;
    for (const auto& inst : ds.instances) {
        auto& s = per_domain[inst.domain];
        s.domain = inst.domain;
        s.instances += 1;
        s.derivable += inst.derivable ? 1 : 0;
        for (const auto& e : inst.known_edges) dom_known[inst.domain].insert(key(e));
        dom_unknown[inst.domain].insert(key(inst.unknown_edge));
    }
    DomainStats total;
    total.domain = "total";
    std::set<std::string> all_known, all_unknown;
    for (const auto& dom : kDomains) {
        auto it = per_domain.find(dom);
        if (it == per_domain.end()) continue;
        it->second.known_unique = static_cast<long long>(dom_known[dom].size());
        it->second.unknown_unique = static_cast<long long>(dom_unknown[dom].size());
        ds.stats.push_back(it->second);
        total.instances += it->second.instances;
        total.derivable += it->second.derivable;
        all_known.insert(dom_known[dom].begin(), dom_known[dom].end());
        all_unknown.insert(dom_unknown[dom].begin(), dom_unknown[dom].end());
    }
    total.known_unique = static_cast<long long>(all_known.size());
    total.unknown_unique = static_cast<long long>(all_unknown.size());
    ds.stats.push_back(total);
    return ds;
}

std::string stats_csv(const std::vector<DomainStats>& stats) {
    std::ostringstream out;
    out << "domain,instances,derivable,derivable_pct,known_edges,unknown_edges\n";
    for (const auto& s : stats) {
        char pct[32];
        std::snprintf(pct, sizeof(pct), "%.1f", s.derivable_pct());
        out << domain_display(s.domain) << "," << s.instances << "," << s.derivable
            << "," << pct << "," << s.known_unique << "," << s.unknown_unique << "\n";
    }
    return out.str();
}

void write_dataset(const Dataset& ds, const std::string& jsonl_path,
                   const std::string& stats_path) {
    std::ofstream out(jsonl_path);
    if (!out) throw FormatError("cannot write " + jsonl_path);
    for (const auto& inst : ds.instances) {
        ordered_json j;
        j["id"] = inst.id;
        j["domain"] = inst.domain;
        j["typology_id"] = inst.typology_id;
        j["paragraph"] = inst.paragraph;
        j["known_edges"] = ordered_json::array();
        for (const auto& e : inst.known_edges)
            j["known_edges"].push_back(
                {{"relation", e.relation}, {"subject", e.subject}, {"object", e.object}});
        j["unknown_edge"] = {{"relation", inst.unknown_edge.relation},
                             {"subject", inst.unknown_edge.subject},
                             {"object", inst.unknown_edge.object}};
        j["abstract_mask"] = inst.abstract_mask;
        j["abstract_category"] = inst.abstract_category;
        j["abstract_random"] = inst.abstract_random;
        j["derivable"] = inst.derivable;
        out << j.dump() << "\n";
    }
    std::ofstream st(stats_path);
    if (!st) throw FormatError("cannot write " + stats_path);
    st << stats_csv(ds.stats);
}

std::vector<RcbInstance> load_dataset(const std::string& jsonl_path) {
    std::ifstream in(jsonl_path);
    if (!in) throw FormatError("cannot open " + jsonl_path);
    std::vector<RcbInstance> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw FormatError(jsonl_path + ":" + std::to_string(lineno) + ": " +
                              e.what());
        }
        auto where = jsonl_path + ":" + std::to_string(lineno);
        RcbInstance inst;
        inst.id = require_string(j, "id", where);
        inst.domain = require_string(j, "domain", where);
        inst.typology_id = require_string(j, "typology_id", where);
        inst.paragraph = require_string(j, "paragraph", where);
        if (!j.contains("known_edges") || !j["known_edges"].is_array())
            throw FormatError(where + ": missing known_edges");
        for (const auto& e : j["known_edges"]) {
            EdgeSlot s = parse_slot(e, where);
            inst.known_edges.push_back({s.relation, s.subject, s.object});
        }
        if (!j.contains("unknown_edge"))
            throw FormatError(where + ": missing unknown_edge");
        EdgeSlot u = parse_slot(j["unknown_edge"], where);
        inst.unknown_edge = {u.relation, u.subject, u.object};
        inst.abstract_mask = require_string(j, "abstract_mask", where);
        inst.abstract_category = require_string(j, "abstract_category", where);
        inst.abstract_random = require_string(j, "abstract_random", where);
        if (!j.contains("derivable") || !j["derivable"].is_boolean())
            throw FormatError(where + ": missing derivable");
        inst.derivable = j["derivable"].get<bool>();
        out.push_back(std::move(inst));
    }
    return out;
}

}  // namespace oclab::rcb
