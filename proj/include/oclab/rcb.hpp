#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "oclab/rng.hpp"

namespace oclab::rcb {

// Relational Cycle Benchmark generator. A bank of relations, cyclic
// typologies, entailment rules, and a categorized entity pool is loaded from
// JSON (see data/rcb/SCHEMA.md); build_dataset turns it into serialized
// paragraph instances with one held-out edge and three abstraction variants.

struct RelationDef {
    std::string name;
    std::string domain;
    std::string subject_category;
    std::string object_category;
    // statement_templates[0] is subject-first and must have the shape
    // "{s} <verb phrase>." so multiple relations of one subject can be
    // aggregated into a single sentence. [1] is object-first.
    std::vector<std::string> statement_templates;
    // Cloze form: filled with the subject, ends exactly where the object
    // entity string begins.
    std::string query_template;
};

struct EdgeSlot {
    std::string relation;
    std::string subject;  // placeholder
    std::string object;   // placeholder
};

struct EntailmentRule {
    std::string id;
    std::vector<EdgeSlot> premises;  // patterns over rule variables
    EdgeSlot conclusion;
};

enum class HeldoutPolicy { kEntailed, kRandomCycleEdge };

struct Typology {
    std::string id;
    std::string domain;
    int count = 0;  // default instance count
    HeldoutPolicy policy = HeldoutPolicy::kRandomCycleEdge;
    std::string rule_id;  // entailed policy only
    std::vector<EdgeSlot> edges;
    // Placeholders bound to fixed pool entities shared by every instance of
    // this typology. All remaining placeholders are drawn fresh per instance.
    std::map<std::string, std::string> anchors;
};

struct EntityPool {
    std::map<std::string, std::vector<std::string>> categories;
};

struct Triple {
    std::string relation;
    std::string subject;
    std::string object;
    bool operator==(const Triple&) const = default;
};

struct RcbInstance {
    std::string id;
    std::string domain;
    std::string typology_id;
    std::map<std::string, std::string> binding;  // placeholder -> entity
    std::vector<Triple> known_edges;             // slot order, held-out removed
    Triple unknown_edge;
    std::string paragraph;
    std::string abstract_mask;
    std::string abstract_category;
    std::string abstract_random;
    bool derivable = false;
};

struct Bank {
    std::vector<RelationDef> relations;
    std::vector<EntailmentRule> rules;
    std::vector<Typology> typologies;
    EntityPool pool;

    const RelationDef& relation(const std::string& name) const;  // ConfigError
    const EntailmentRule& rule(const std::string& id) const;     // ConfigError
};

// Loaders validate schema and template invariants (FormatError on malformed
// JSON or missing fields, ConfigError on invariant violations).
std::vector<RelationDef> load_relations(const std::string& path);
std::vector<EntailmentRule> load_rules(const std::string& path);
std::vector<Typology> load_typologies(const std::string& path);
EntityPool load_pool(const std::string& path);
Bank load_bank(const std::string& dir);

// Replaces every {s} / {o} in the template.
std::string fill_template(std::string tmpl, const std::string& subject,
                          const std::string& object = "");

// Cloze prompt and expected completion for one realized edge.
std::pair<std::string, std::string> edge_query(const Triple& edge, const Bank& bank);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Placeholder -> category implied by the relation slots. ConfigError when a
// placeholder is used with two different categories.
std::map<std::string, std::string> placeholder_categories(const Typology& t,
                                                          const Bank& bank);

// Structural checks: >= 3 edges, connected placeholder graph, at least one
// undirected cycle (parallel edges count), anchors resolvable against the
// pool, and for entailed typologies that the rule derives exactly one edge
// from the others.
ValidationReport validate_typology(const Typology& t, const Bank& bank);

// Edge indices lying on some undirected cycle of the placeholder multigraph.
std::vector<size_t> cycle_edge_indices(const Typology& t);

// Entailed: the rule's conclusion edge, rng untouched. Random: uniform over
// cycle edges. GenError when no cycle edge exists.
size_t select_heldout(const Typology& t, const Bank& bank, Rng& rng);

// Sequential cursor over per-category name lists. Callers control shuffling
// and partitioning; draw throws GenError on exhaustion.
class PoolDraw {
  public:
    PoolDraw() = default;
    explicit PoolDraw(std::map<std::string, std::vector<std::string>> names);
    std::string draw(const std::string& category);
    size_t remaining(const std::string& category) const;

  private:
    std::map<std::string, std::vector<std::string>> names_;
    std::map<std::string, size_t> next_;
};

// Pool minus reserved names, each category Fisher-Yates shuffled.
PoolDraw make_pool_draw(const EntityPool& pool,
                        const std::vector<std::string>& reserved, Rng& rng);

// count instances with fresh pairwise-disjoint entity bindings. Paragraph and
// abstraction fields are left empty; serialize and the abstract_* ops fill
// them. GenError on pool exhaustion or duplicate binding.
std::vector<RcbInstance> instantiate(const Typology& t, const Bank& bank, int count,
                                     PoolDraw& draw, Rng& rng);

struct Sentence {
    std::string text;
    int n_edges = 1;
};

// One sentence per known-edge group: maximal runs of consecutive edges with a
// shared subject aggregate into a single subject-first sentence; singleton
// groups draw their template (and thus subject/object order) from rng.
std::vector<Sentence> serialize_sentences(const RcbInstance& inst, const Bank& bank,
                                          Rng& rng);
std::string serialize(const RcbInstance& inst, const Bank& bank, Rng& rng);

// Entity mentions replaced by [E1]..[Ek], indexed by first appearance in the
// paragraph. GenError when a bound entity does not occur in the text.
std::string abstract_mask(const RcbInstance& inst);

// As abstract_mask but substituting each entity's semantic category word.
std::string abstract_category(const RcbInstance& inst, const Bank& bank);

struct MaskedSentence {
    std::string text;
    int n_edges = 1;
    std::string instance_id;  // source instance, excluded from own draws
};

// Uniform draws (without replacement) of corpus sentences, none from inst
// itself, until the drawn relation counts sum exactly to |known_edges|.
// GenError when the exact total is unreachable.
std::string abstract_random(const RcbInstance& inst,
                            const std::vector<MaskedSentence>& corpus, Rng& rng);

struct BuildConfig {
    uint64_t seed = 42;
    std::vector<std::string> only;               // empty = every typology
    std::map<std::string, int> count_overrides;  // typology id -> count
};

struct DomainStats {
    std::string domain;
    int instances = 0;
    int derivable = 0;
    long long known_unique = 0;
    long long unknown_unique = 0;
    double derivable_pct() const;
};

struct Dataset {
    std::vector<RcbInstance> instances;
    std::vector<DomainStats> stats;  // fixed domain order, Total row last
};

// Validates every selected typology (GenError listing offenders), generates
// instances on independently seeded per-typology streams over a disjoint
// pool partition, serializes, builds all three abstraction variants, and
// enforces leakage freedom: known and unknown triple sets are disjoint and no
// unknown edge's surface form appears in any text of its instance.
Dataset build_dataset(const Bank& bank, const BuildConfig& cfg);

std::string stats_csv(const std::vector<DomainStats>& stats);
void write_dataset(const Dataset& ds, const std::string& jsonl_path,
                   const std::string& stats_path);
std::vector<RcbInstance> load_dataset(const std::string& jsonl_path);

}  // namespace oclab::rcb
