#!/usr/bin/env python3
"""Builds the checked-in relational-cycle data bank.

Emits data/rcb/{relations,rules,typologies,entity_pool}.json. The bank is a
synthetic reconstruction: typology shapes and per-typology instance counts are
chosen so that the generated dataset reproduces the published per-domain
statistics exactly (instances, derivable counts, unique known/unknown edge
counts). Run from the repository root. Deterministic: same script, same output.
"""

import itertools
import json
import random
import sys
from collections import defaultdict

OUT_DIR = "data/rcb"
RNG = random.Random(727)

# ---------------------------------------------------------------- relations

# (name, domain, subject_cat, object_cat, vp) with optional overrides.
# statement template 0 is always "{s} {vp}."; when vp ends with " {o}" the
# object-first template and the query prefix are derived mechanically.
REL_ROWS = []


def REL(name, domain, scat, ocat, vp, obj_first=None, query=None):
    if vp.endswith(" {o}"):
        stem = vp[: -len(" {o}")]
        if obj_first is None:
            obj_first = "It is {o} that {s} " + stem + "."
        if query is None:
            query = "{s} " + stem + " "
    else:
        assert obj_first is not None and query is not None, name
    REL_ROWS.append(
        {
            "name": name,
            "domain": domain,
            "subject_category": scat,
            "object_category": ocat,
            "statement_templates": ["{s} " + vp + ".", obj_first],
            "query_template": query,
        }
    )


G = "genealogy"
REL("mother_of", G, "person", "person", "is {o}'s mother",
    obj_first="{o}'s mother is {s}.", query="{s} is the mother of ")
REL("sibling_of", G, "person", "person", "is a sibling of {o}")
REL("born_in", G, "person", "village", "was born in {o}")
REL("village_in_parish", G, "village", "parish", "lies within {o}")
REL("born_in_parish", G, "person", "parish", "was born within the bounds of {o}")
REL("married_at", G, "person", "church", "was married at {o}")
REL("church_in_town", G, "church", "town", "stands in {o}")
REL("married_in_town", G, "person", "town", "celebrated a wedding in {o}")
REL("heir_to", G, "person", "estate", "is heir to {o}")
REL("estate_in_county", G, "estate", "county", "is situated in {o}")
REL("landholder_in", G, "person", "county", "holds land in {o}")
REL("scion_of", G, "person", "house", "is a scion of {o}")
REL("house_seated_in", G, "house", "duchy", "keeps its seat in {o}")
REL("ancestral_seat", G, "person", "duchy", "traces ancestry to {o}")
REL("raised_in", G, "person", "hamlet", "was raised in {o}")
REL("hamlet_in_valley", G, "hamlet", "valley", "nestles in {o}")
REL("raised_in_valley", G, "person", "valley", "grew up in {o}")
REL("buried_at", G, "person", "cemetery", "was buried at {o}")
REL("cemetery_in_borough", G, "cemetery", "borough", "occupies ground in {o}")
REL("buried_in_borough", G, "person", "borough", "was laid to rest in {o}")
REL("fostered_by", G, "person", "clan", "was fostered by {o}")
REL("clan_of_region", G, "clan", "region", "hails from {o}")
REL("fostered_in_region", G, "person", "region", "spent fosterage years in {o}")
REL("cousin_of", G, "person", "person", "is a cousin of {o}")
REL("godparent_of", G, "person", "person", "is godparent to {o}")
REL("namesake_of", G, "person", "person", "is the namesake of {o}")
REL("uncle_of", G, "person", "person", "is an uncle of {o}")
REL("ward_of", G, "person", "person", "is a ward of {o}")
REL("betrothed_to", G, "person", "person", "is betrothed to {o}")
REL("grandmother_of", G, "person", "person", "is the grandmother of {o}")
REL("foster_parent_of", G, "person", "person", "is foster parent to {o}")
REL("half_sibling_of", G, "person", "person", "is a half sibling of {o}")
REL("aunt_of", G, "person", "person", "is an aunt of {o}")
REL("godchild_of", G, "person", "person", "is a godchild of {o}")
REL("twin_of", G, "person", "person", "is the twin of {o}")
REL("nephew_of", G, "person", "person", "is a nephew of {o}")
REL("guardian_of", G, "person", "person", "acts as guardian of {o}")
REL("stepbrother_of", G, "person", "person", "is a stepbrother of {o}")
REL("baptized_at", G, "person", "chapel", "was baptized at {o}")
REL("confirmed_at", G, "person", "chapel", "was confirmed at {o}")
REL("chapel_in_dell", G, "chapel", "dell", "sits in {o}")
REL("dell_in_shire", G, "dell", "shire", "opens into {o}")
REL("shire_in_march", G, "shire", "march", "answers to {o}")
REL("march_of_realm", G, "march", "realm", "belongs to {o}")
REL("schooled_at", G, "person", "abbey", "was schooled at {o}")
REL("ordained_at", G, "person", "abbey", "was ordained at {o}")
REL("abbey_in_diocese", G, "abbey", "diocese", "falls under {o}")
REL("diocese_in_deanery", G, "diocese", "deanery", "reports to {o}")
REL("deanery_in_palatinate", G, "deanery", "palatinate", "is administered by {o}")
REL("palatinate_of_crownland", G, "palatinate", "crownland", "is held by {o}")
REL("apprenticed_at", G, "person", "manor", "was apprenticed at {o}")
REL("served_at", G, "person", "manor", "served at {o}")
REL("manor_in_bailiwick", G, "manor", "bailiwick", "pays dues to {o}")
REL("bailiwick_in_canton", G, "bailiwick", "canton", "is part of {o}")
REL("canton_in_prefecture", G, "canton", "prefecture", "falls within {o}")
REL("prefecture_of_kingdom", G, "prefecture", "kingdom", "owes fealty to {o}")
REL("wed_at", G, "person", "priory", "was wed at {o}")
REL("took_vows_at", G, "person", "priory", "took vows at {o}")
REL("priory_in_township", G, "priory", "township", "adjoins {o}")
REL("township_in_hundred", G, "township", "hundred", "is counted within {o}")
REL("hundred_of_barony", G, "hundred", "barony", "is sworn to {o}")
REL("presented_at", G, "person", "chantry", "was presented at {o}")
REL("knighted_at", G, "person", "chantry", "was knighted at {o}")
REL("chantry_of_glebe", G, "chantry", "glebe", "draws income from {o}")
REL("glebe_in_wapentake", G, "glebe", "wapentake", "is assessed under {o}")
REL("wapentake_of_lordship", G, "wapentake", "lordship", "renders service to {o}")

P = "profession"
REL("clerks_for", P, "person", "chambers", "clerks for {o}")
REL("chambers_retained_by", P, "chambers", "firm", "is retained by {o}")
REL("firm_counsel_to", P, "firm", "consortium", "serves as counsel to {o}")
REL("consortium_rooted_in", P, "consortium", "city", "is rooted in {o}")
REL("city_within", P, "city", "country", "is located within {o}")
REL("practices_in", P, "person", "country", "practices law across {o}")
REL("interns_at", P, "person", "clinic", "interns at {o}")
REL("clinic_run_by", P, "clinic", "trust", "is run by {o}")
REL("trust_funded_by", P, "trust", "foundation", "is funded by {o}")
REL("foundation_chartered_in", P, "foundation", "city", "was chartered in {o}")
REL("licensed_in", P, "person", "country", "is licensed to practice in {o}")
REL("drafts_for", P, "person", "bureau", "drafts plans for {o}")
REL("bureau_division_of", P, "bureau", "works", "is a division of {o}")
REL("works_supplies", P, "works", "combine", "supplies {o}")
REL("combine_seated_in", P, "combine", "city", "is headquartered in {o}")
REL("engineers_in", P, "person", "country", "builds projects throughout {o}")
REL("reports_for", P, "person", "desk", "reports for {o}")
REL("desk_of_paper", P, "desk", "newspaper", "belongs to {o}")
REL("paper_held_by", P, "newspaper", "syndicate", "is owned by {o}")
REL("syndicate_based_in", P, "syndicate", "city", "operates out of {o}")
REL("files_stories_in", P, "person", "country", "files stories from {o}")
REL("plates_at", P, "person", "kitchen", "plates dishes at {o}")
REL("kitchen_of_house", P, "kitchen", "restaurant", "serves {o}")
REL("restaurant_under", P, "restaurant", "group", "trades under {o}")
REL("group_anchored_in", P, "group", "city", "is anchored in {o}")
REL("cooks_in", P, "person", "country", "cooks professionally in {o}")
REL("audits_for", P, "person", "branch", "audits accounts for {o}")
REL("branch_of_bank", P, "branch", "bank", "is a branch of {o}")
REL("bank_member_of", P, "bank", "exchange", "holds a seat on {o}")
REL("exchange_housed_in", P, "exchange", "city", "is housed in {o}")
REL("trades_in", P, "person", "country", "clears trades in {o}")
REL("sails_for", P, "person", "fleet", "sails for {o}")
REL("fleet_managed_by", P, "fleet", "line", "is managed by {o}")
REL("line_flagged_to", P, "line", "registry", "is flagged to {o}")
REL("registry_office_in", P, "registry", "city", "keeps offices in {o}")
REL("ships_out_of", P, "person", "country", "ships cargo out of {o}")

A = "arts"
REL("mentored", A, "person", "person", "mentored {o}")
REL("fellow_pupil_of", A, "person", "person", "is a fellow pupil of {o}")
REL("commissioned", A, "person", "person", "commissioned {o}")
REL("shares_patron_with", A, "person", "person", "shares a patron with {o}")
REL("painted", A, "person", "artwork", "painted {o}")
REL("exhibited_at", A, "artwork", "gallery", "was exhibited at {o}")
REL("gallery_led_by", A, "gallery", "person", "is led by {o}")
REL("rival_of", A, "person", "person", "is a rival of {o}")
REL("sculpted", A, "person", "statue", "sculpted {o}")
REL("installed_in", A, "statue", "plaza", "was installed in {o}")
REL("plaza_designed_by", A, "plaza", "person", "was designed by {o}")
REL("corresponded_with", A, "person", "person", "corresponded with {o}")
REL("restored", A, "person", "fresco", "restored {o}")
REL("catalogued", A, "person", "fresco", "catalogued {o}")
REL("sketched", A, "person", "fresco", "sketched {o}")
REL("fresco_adorns", A, "fresco", "nave", "adorns {o}")
REL("nave_of_basilica", A, "nave", "basilica", "forms part of {o}")
REL("basilica_in_quarter", A, "basilica", "quarter", "rises in {o}")

S = "science"
REL("researches_at", S, "person", "institute", "researches at {o}")
REL("institute_attached_to", S, "institute", "university", "is attached to {o}")
REL("university_in", S, "university", "metropolis", "maintains its campus in {o}")
REL("based_in", S, "person", "metropolis", "is based in {o}")
REL("collaborated_with", S, "person", "person", "collaborated with {o}")
REL("cited_findings_of", S, "person", "person", "cited the findings of {o}")
REL("disputed_model_of", S, "person", "person", "disputed the model of {o}")
REL("lectures_at", S, "person", "observatory", "lectures at {o}")
REL("archives_data_at", S, "person", "observatory", "archives data at {o}")
REL("observatory_run_by", S, "observatory", "academy", "is operated by {o}")
REL("reviews_for", S, "person", "journal", "reviews manuscripts for {o}")
REL("published_in", S, "person", "journal", "published findings in {o}")
REL("journal_issued_by", S, "journal", "society", "is issued by {o}")

H = "history"
REL("conquered", H, "person", "citadel", "conquered {o}")
REL("shares_conqueror_with", H, "citadel", "citadel", "fell to the same conqueror as {o}")
REL("appointed", H, "person", "person", "appointed {o}")
REL("served_alongside", H, "person", "person", "served alongside {o}")
REL("besieged", H, "person", "fortress", "laid siege to {o}")
REL("fell_in_same_campaign_as", H, "fortress", "fortress", "fell in the same campaign as {o}")
REL("chronicled", H, "person", "battle", "chronicled {o}")
REL("recorded_alongside", H, "battle", "battle", "was recorded alongside {o}")

M = "music"
REL("first_chair_at", M, "person", "orchestra", "holds first chair at {o}")
REL("orchestra_resident_at", M, "orchestra", "hall", "is resident at {o}")
REL("hall_stands_in", M, "hall", "capital", "stands at the heart of {o}")
REL("performs_in", M, "person", "capital", "performs regularly in {o}")
REL("duet_with", M, "person", "person", "sang duets with {o}")
REL("arranged_for", M, "person", "person", "arranged scores for {o}")
REL("toured_with", M, "person", "person", "toured with {o}")
REL("records_for", M, "person", "label", "records for {o}")
REL("debuted_on", M, "person", "label", "made a debut on {o}")
REL("label_part_of", M, "label", "collective", "operates as part of {o}")
REL("studied_at", M, "person", "conservatory", "studied at {o}")
REL("teaches_at", M, "person", "conservatory", "teaches masterclasses at {o}")
REL("conservatory_endowed_by", M, "conservatory", "fund", "is endowed by {o}")

E = "geopolitics"
REL("annexed", E, "empire", "province", "annexed {o}")
REL("co_administered_with", E, "province", "province", "is co-administered with {o}")
REL("allied_with", E, "state", "state", "forged an alliance with {o}")
REL("shares_ally_with", E, "state", "state", "shares an ally with {o}")
REL("claims", E, "state", "territory", "lays claim to {o}")
REL("contested_alongside", E, "territory", "territory", "is contested alongside {o}")
REL("borders", E, "republic", "republic", "borders {o}")
REL("trades_grain_with", E, "republic", "republic", "trades grain with {o}")
REL("sanctions", E, "republic", "republic", "imposed sanctions on {o}")
REL("hosts_summit_with", E, "republic", "republic", "hosts summits with {o}")
REL("shares_river_with", E, "dominion", "dominion", "shares a river with {o}")
REL("patrols_strait_with", E, "dominion", "dominion", "patrols a strait with {o}")
REL("maintains_consulate_in", E, "dominion", "dominion", "maintains a consulate in {o}")

T = "sports"
REL("plays_for", T, "person", "team", "plays for {o}")
REL("team_in_league", T, "team", "league", "competes in {o}")
REL("league_sanctioned_by", T, "league", "federation", "is sanctioned by {o}")
REL("registered_with", T, "person", "federation", "is registered with {o}")
REL("coaches", T, "person", "squad", "coaches {o}")
REL("squad_trains_at", T, "squad", "grounds", "trains at {o}")
REL("grounds_owned_by", T, "grounds", "club", "is kept by {o}")
REL("holds_pass_for", T, "person", "club", "holds a staff pass for {o}")
REL("captains", T, "person", "crew", "captains {o}")
REL("crew_races_in", T, "crew", "regatta", "races in {o}")
REL("regatta_hosted_by", T, "regatta", "port", "is hosted by {o}")
REL("competes_at", T, "person", "port", "competes on the waters of {o}")
REL("bouts_for", T, "person", "gym", "fights bouts for {o}")
REL("gym_affiliated_with", T, "gym", "promotion", "is affiliated with {o}")
REL("promotion_ranked_by", T, "promotion", "commission", "is ranked by {o}")
REL("licensed_by", T, "person", "commission", "is licensed by {o}")

# ---------------------------------------------------------------- rules

RULES = []


def RULE(rid, premises, conclusion):
    RULES.append(
        {
            "id": rid,
            "premises": [{"relation": r, "subject": s, "object": o} for r, s, o in premises],
            "conclusion": {
                "relation": conclusion[0],
                "subject": conclusion[1],
                "object": conclusion[2],
            },
        }
    )


RULE("rule_sibling", [("mother_of", "X", "Y"), ("mother_of", "X", "Z")],
     ("sibling_of", "Y", "Z"))
RULE("rule_born_parish", [("born_in", "X", "Y"), ("village_in_parish", "Y", "Z")],
     ("born_in_parish", "X", "Z"))
RULE("rule_married_town", [("married_at", "X", "Y"), ("church_in_town", "Y", "Z")],
     ("married_in_town", "X", "Z"))
RULE("rule_landholder", [("heir_to", "X", "Y"), ("estate_in_county", "Y", "Z")],
     ("landholder_in", "X", "Z"))
RULE("rule_ancestral", [("scion_of", "X", "Y"), ("house_seated_in", "Y", "Z")],
     ("ancestral_seat", "X", "Z"))
RULE("rule_raised_valley", [("raised_in", "X", "Y"), ("hamlet_in_valley", "Y", "Z")],
     ("raised_in_valley", "X", "Z"))
RULE("rule_buried_borough", [("buried_at", "X", "Y"), ("cemetery_in_borough", "Y", "Z")],
     ("buried_in_borough", "X", "Z"))
RULE("rule_fostered_region", [("fostered_by", "X", "Y"), ("clan_of_region", "Y", "Z")],
     ("fostered_in_region", "X", "Z"))

for trade, chain, concl in [
    ("law", ["clerks_for", "chambers_retained_by", "firm_counsel_to",
             "consortium_rooted_in", "city_within"], "practices_in"),
    ("medicine", ["interns_at", "clinic_run_by", "trust_funded_by",
                  "foundation_chartered_in", "city_within"], "licensed_in"),
    ("engineering", ["drafts_for", "bureau_division_of", "works_supplies",
                     "combine_seated_in", "city_within"], "engineers_in"),
    ("journalism", ["reports_for", "desk_of_paper", "paper_held_by",
                    "syndicate_based_in", "city_within"], "files_stories_in"),
    ("culinary", ["plates_at", "kitchen_of_house", "restaurant_under",
                  "group_anchored_in", "city_within"], "cooks_in"),
    ("finance", ["audits_for", "branch_of_bank", "bank_member_of",
                 "exchange_housed_in", "city_within"], "trades_in"),
    ("maritime", ["sails_for", "fleet_managed_by", "line_flagged_to",
                  "registry_office_in", "city_within"], "ships_out_of"),
]:
    vars_ = ["X1", "X2", "X3", "X4", "X5", "X6"]
    prem = [(chain[i], vars_[i], vars_[i + 1]) for i in range(5)]
    RULE("rule_prof_" + trade, prem, (concl, "X1", "X6"))

RULE("rule_fellow_pupil", [("mentored", "X", "Y"), ("mentored", "X", "Z")],
     ("fellow_pupil_of", "Y", "Z"))
RULE("rule_shared_patron", [("commissioned", "X", "Y"), ("commissioned", "X", "Z")],
     ("shares_patron_with", "Y", "Z"))
RULE("rule_based_city",
     [("researches_at", "X", "Y"), ("institute_attached_to", "Y", "Z"),
      ("university_in", "Z", "W")], ("based_in", "X", "W"))
RULE("rule_conquest", [("conquered", "X", "Y"), ("conquered", "X", "Z")],
     ("shares_conqueror_with", "Y", "Z"))
RULE("rule_court", [("appointed", "X", "Y"), ("appointed", "X", "Z")],
     ("served_alongside", "Y", "Z"))
RULE("rule_siege", [("besieged", "X", "Y"), ("besieged", "X", "Z")],
     ("fell_in_same_campaign_as", "Y", "Z"))
RULE("rule_chronicle", [("chronicled", "X", "Y"), ("chronicled", "X", "Z")],
     ("recorded_alongside", "Y", "Z"))
RULE("rule_performs_city",
     [("first_chair_at", "X", "Y"), ("orchestra_resident_at", "Y", "Z"),
      ("hall_stands_in", "Z", "W")], ("performs_in", "X", "W"))
RULE("rule_annex", [("annexed", "X", "Y"), ("annexed", "X", "Z")],
     ("co_administered_with", "Y", "Z"))
RULE("rule_pact", [("allied_with", "X", "Y"), ("allied_with", "X", "Z")],
     ("shares_ally_with", "Y", "Z"))
RULE("rule_claim", [("claims", "X", "Y"), ("claims", "X", "Z")],
     ("contested_alongside", "Y", "Z"))
RULE("rule_registered",
     [("plays_for", "X", "Y"), ("team_in_league", "Y", "Z"),
      ("league_sanctioned_by", "Z", "W")], ("registered_with", "X", "W"))
RULE("rule_holds_pass",
     [("coaches", "X", "Y"), ("squad_trains_at", "Y", "Z"),
      ("grounds_owned_by", "Z", "W")], ("holds_pass_for", "X", "W"))
RULE("rule_competes_city",
     [("captains", "X", "Y"), ("crew_races_in", "Y", "Z"),
      ("regatta_hosted_by", "Z", "W")], ("competes_at", "X", "W"))
RULE("rule_licensed",
     [("bouts_for", "X", "Y"), ("gym_affiliated_with", "Y", "Z"),
      ("promotion_ranked_by", "Z", "W")], ("licensed_by", "X", "W"))

# ---------------------------------------------------------------- typologies

# Shapes (per instance, K known edges = slots - 1):
#   ent_triangle  edges r1(S,J) r1(S,K) | r2(J,K) conclusion; all free
#   ent_chain     r1(F,A1) r2(A1,A2) | r3(F,A2); A* anchored
#   ent_chain2    r1(F,A1) r2(A1,A2) r3(A2,A3) | r4(F,A3)
#   ent_cycle4    r1(F1,F2) r2(F2,F3) r3(F3,F4) | r4(F1,F4); all free
#   ent_cycle6    five premises around F1..F6 | conclusion(F1,F6); all free
#   rand_tri      triangle of free placeholders, held-out uniform over 3
#   rand_sq       4-cycle of free placeholders, held-out uniform over 4
#   rand_par_k    two parallel edges F-A1 (cycle) + anchored chain of k edges
#   rand_par_plus parallel pair + one extra free spoke + anchored chain

TYPOLOGIES = []


def typ(tid, domain, count, policy, edges, anchors, rule=None):
    TYPOLOGIES.append(
        {
            "id": tid,
            "domain": domain,
            "count": count,
            "policy": policy,
            "rule": rule,
            "edges": [{"relation": r, "subject": s, "object": o} for r, s, o in edges],
            "anchor_placeholders": anchors,  # placeholder -> category
        }
    )


def ent_triangle(tid, domain, count, rule, rel_prem, rel_concl):
    typ(tid, domain, count, "entailed",
        [(rel_prem, "S", "J"), (rel_prem, "S", "K"), (rel_concl, "J", "K")], {}, rule)


def ent_chain(tid, domain, count, rule, r1, c1, r2, c2, r3):
    typ(tid, domain, count, "entailed",
        [(r1, "F", "A1"), (r2, "A1", "A2"), (r3, "F", "A2")],
        {"A1": c1, "A2": c2}, rule)


def ent_chain2(tid, domain, count, rule, r1, c1, r2, c2, r3, c3, r4):
    typ(tid, domain, count, "entailed",
        [(r1, "F", "A1"), (r2, "A1", "A2"), (r3, "A2", "A3"), (r4, "F", "A3")],
        {"A1": c1, "A2": c2, "A3": c3}, rule)


def ent_cycle4(tid, domain, count, rule, rels):
    typ(tid, domain, count, "entailed",
        [(rels[0], "F1", "F2"), (rels[1], "F2", "F3"), (rels[2], "F3", "F4"),
         (rels[3], "F1", "F4")], {}, rule)


def ent_cycle6(tid, domain, count, rule, rels):
    edges = [(rels[i], f"F{i + 1}", f"F{i + 2}") for i in range(5)]
    edges.append((rels[5], "F1", "F6"))
    typ(tid, domain, count, "entailed", edges, {}, rule)


def rand_tri(tid, domain, count, rels):
    typ(tid, domain, count, "random_cycle",
        [(rels[0], "F1", "F2"), (rels[1], "F2", "F3"), (rels[2], "F3", "F1")], {})


def rand_sq(tid, domain, count, rels):
    typ(tid, domain, count, "random_cycle",
        [(rels[0], "F1", "F2"), (rels[1], "F2", "F3"), (rels[2], "F3", "F4"),
         (rels[3], "F4", "F1")], {})


def rand_par(tid, domain, count, par_rels, chain):
    # chain: list of (relation, subject_cat, object_cat); anchors A1..A(k+1)
    edges = [(par_rels[0], "F", "A1"), (par_rels[1], "F", "A1")]
    anchors = {"A1": chain[0][1]}
    for i, (rel, _, ocat) in enumerate(chain):
        edges.append((rel, f"A{i + 1}", f"A{i + 2}"))
        anchors[f"A{i + 2}"] = ocat
    typ(tid, domain, count, "random_cycle", edges, anchors)


ent_triangle("gen_sibling_triangle", G, 25, "rule_sibling", "mother_of", "sibling_of")
ent_chain("gen_chain_birth", G, 25, "rule_born_parish",
          "born_in", "village", "village_in_parish", "parish", "born_in_parish")
ent_chain("gen_chain_marriage", G, 25, "rule_married_town",
          "married_at", "church", "church_in_town", "town", "married_in_town")
ent_chain("gen_chain_estate", G, 25, "rule_landholder",
          "heir_to", "estate", "estate_in_county", "county", "landholder_in")
ent_chain("gen_chain_dynasty", G, 25, "rule_ancestral",
          "scion_of", "house", "house_seated_in", "duchy", "ancestral_seat")
ent_chain("gen_chain_upbringing", G, 25, "rule_raised_valley",
          "raised_in", "hamlet", "hamlet_in_valley", "valley", "raised_in_valley")
ent_chain("gen_chain_burial", G, 25, "rule_buried_borough",
          "buried_at", "cemetery", "cemetery_in_borough", "borough", "buried_in_borough")
ent_chain("gen_chain_fosterage", G, 25, "rule_fostered_region",
          "fostered_by", "clan", "clan_of_region", "region", "fostered_in_region")
rand_tri("gen_tri_kin1", G, 30, ["cousin_of", "godparent_of", "namesake_of"])
rand_tri("gen_tri_kin2", G, 30, ["uncle_of", "ward_of", "betrothed_to"])
rand_tri("gen_tri_kin3", G, 30, ["grandmother_of", "foster_parent_of", "half_sibling_of"])
rand_tri("gen_tri_kin4", G, 30, ["aunt_of", "godchild_of", "twin_of"])
rand_tri("gen_tri_kin5", G, 30, ["nephew_of", "guardian_of", "stepbrother_of"])
rand_par("gen_anch_chapel", G, 30, ["baptized_at", "confirmed_at"],
         [("chapel_in_dell", "chapel", "dell"), ("dell_in_shire", "dell", "shire"),
          ("shire_in_march", "shire", "march"), ("march_of_realm", "march", "realm")])
rand_par("gen_anch_abbey", G, 30, ["schooled_at", "ordained_at"],
         [("abbey_in_diocese", "abbey", "diocese"),
          ("diocese_in_deanery", "diocese", "deanery"),
          ("deanery_in_palatinate", "deanery", "palatinate"),
          ("palatinate_of_crownland", "palatinate", "crownland")])
rand_par("gen_anch_manor", G, 30, ["apprenticed_at", "served_at"],
         [("manor_in_bailiwick", "manor", "bailiwick"),
          ("bailiwick_in_canton", "bailiwick", "canton"),
          ("canton_in_prefecture", "canton", "prefecture"),
          ("prefecture_of_kingdom", "prefecture", "kingdom")])
rand_par("gen_anch_priory", G, 30, ["wed_at", "took_vows_at"],
         [("priory_in_township", "priory", "township"),
          ("township_in_hundred", "township", "hundred"),
          ("hundred_of_barony", "hundred", "barony")])
rand_par("gen_anch_chantry", G, 30, ["presented_at", "knighted_at"],
         [("chantry_of_glebe", "chantry", "glebe"),
          ("glebe_in_wapentake", "glebe", "wapentake"),
          ("wapentake_of_lordship", "wapentake", "lordship")])

ent_cycle6("prof_law", P, 26, "rule_prof_law",
           ["clerks_for", "chambers_retained_by", "firm_counsel_to",
            "consortium_rooted_in", "city_within", "practices_in"])
ent_cycle6("prof_medicine", P, 26, "rule_prof_medicine",
           ["interns_at", "clinic_run_by", "trust_funded_by",
            "foundation_chartered_in", "city_within", "licensed_in"])
ent_cycle6("prof_engineering", P, 26, "rule_prof_engineering",
           ["drafts_for", "bureau_division_of", "works_supplies",
            "combine_seated_in", "city_within", "engineers_in"])
ent_cycle6("prof_journalism", P, 26, "rule_prof_journalism",
           ["reports_for", "desk_of_paper", "paper_held_by",
            "syndicate_based_in", "city_within", "files_stories_in"])
ent_cycle6("prof_culinary", P, 26, "rule_prof_culinary",
           ["plates_at", "kitchen_of_house", "restaurant_under",
            "group_anchored_in", "city_within", "cooks_in"])
ent_cycle6("prof_finance", P, 25, "rule_prof_finance",
           ["audits_for", "branch_of_bank", "bank_member_of",
            "exchange_housed_in", "city_within", "trades_in"])
ent_cycle6("prof_maritime", P, 25, "rule_prof_maritime",
           ["sails_for", "fleet_managed_by", "line_flagged_to",
            "registry_office_in", "city_within", "ships_out_of"])

ent_triangle("arts_mentor_triangle", A, 25, "rule_fellow_pupil", "mentored",
             "fellow_pupil_of")
ent_triangle("arts_patron_triangle", A, 25, "rule_shared_patron", "commissioned",
             "shares_patron_with")
rand_sq("arts_canvas_square", A, 25, ["painted", "exhibited_at", "gallery_led_by",
                                      "rival_of"])
rand_sq("arts_statue_square", A, 22, ["sculpted", "installed_in", "plaza_designed_by",
                                      "corresponded_with"])
# parallel pair + one extra free spoke + anchored chain of three
typ("arts_fresco_anchored", A, 18, "random_cycle",
    [("restored", "F1", "A1"), ("catalogued", "F1", "A1"), ("sketched", "F2", "A1"),
     ("fresco_adorns", "A1", "A2"), ("nave_of_basilica", "A2", "A3"),
     ("basilica_in_quarter", "A3", "A4")],
    {"A1": "fresco", "A2": "nave", "A3": "basilica", "A4": "quarter"})

ent_chain2("sci_chain_campus", S, 25, "rule_based_city",
           "researches_at", "institute", "institute_attached_to", "university",
           "university_in", "metropolis", "based_in")
rand_tri("sci_triangle", S, 21, ["collaborated_with", "cited_findings_of",
                                 "disputed_model_of"])
rand_par("sci_observatory", S, 27, ["lectures_at", "archives_data_at"],
         [("observatory_run_by", "observatory", "academy")])
rand_par("sci_journal", S, 27, ["reviews_for", "published_in"],
         [("journal_issued_by", "journal", "society")])

ent_triangle("hist_conquest", H, 25, "rule_conquest", "conquered",
             "shares_conqueror_with")
ent_triangle("hist_court", H, 25, "rule_court", "appointed", "served_alongside")
ent_triangle("hist_siege", H, 25, "rule_siege", "besieged", "fell_in_same_campaign_as")
ent_triangle("hist_chronicle", H, 25, "rule_chronicle", "chronicled",
             "recorded_alongside")

ent_chain2("mus_chain_hall", M, 25, "rule_performs_city",
           "first_chair_at", "orchestra", "orchestra_resident_at", "hall",
           "hall_stands_in", "capital", "performs_in")
rand_tri("mus_triangle", M, 21, ["duet_with", "arranged_for", "toured_with"])
rand_par("mus_label", M, 27, ["records_for", "debuted_on"],
         [("label_part_of", "label", "collective")])
rand_par("mus_conservatory", M, 27, ["studied_at", "teaches_at"],
         [("conservatory_endowed_by", "conservatory", "fund")])

ent_triangle("geo_annex", E, 9, "rule_annex", "annexed", "co_administered_with")
ent_triangle("geo_pact", E, 8, "rule_pact", "allied_with", "shares_ally_with")
ent_triangle("geo_claim", E, 8, "rule_claim", "claims", "contested_alongside")
rand_sq("geo_square", E, 25, ["borders", "trades_grain_with", "sanctions",
                              "hosts_summit_with"])
rand_tri("geo_triangle", E, 25, ["shares_river_with", "patrols_strait_with",
                                 "maintains_consulate_in"])

ent_cycle4("sp_league", T, 19, "rule_registered",
           ["plays_for", "team_in_league", "league_sanctioned_by", "registered_with"])
ent_cycle4("sp_grounds", T, 19, "rule_holds_pass",
           ["coaches", "squad_trains_at", "grounds_owned_by", "holds_pass_for"])
ent_cycle4("sp_regatta", T, 19, "rule_competes_city",
           ["captains", "crew_races_in", "regatta_hosted_by", "competes_at"])
ent_cycle4("sp_commission", T, 18, "rule_licensed",
           ["bouts_for", "gym_affiliated_with", "promotion_ranked_by", "licensed_by"])

# ------------------------------------------------------------ self-check

REL_BY_NAME = {r["name"]: r for r in REL_ROWS}
assert len(REL_BY_NAME) == len(REL_ROWS), "duplicate relation name"
RULE_BY_ID = {r["id"]: r for r in RULES}

EXPECTED = {
    "genealogy": (500, 200, 700, 500),
    "profession": (180, 180, 900, 180),
    "arts": (115, 50, 280, 115),
    "science": (100, 25, 125, 100),
    "history": (100, 100, 200, 100),
    "music": (100, 25, 125, 100),
    "geopolitics": (75, 25, 175, 75),
    "sports": (75, 75, 225, 75),
}


def placeholder_categories(t):
    cats = {}
    for e in t["edges"]:
        rel = REL_BY_NAME[e["relation"]]
        for ph, cat in [(e["subject"], rel["subject_category"]),
                        (e["object"], rel["object_category"])]:
            if ph in cats and cats[ph] != cat:
                raise SystemExit(f"{t['id']}: placeholder {ph} category conflict "
                                 f"{cats[ph]} vs {cat}")
            cats[ph] = cat
    for ph, cat in t["anchor_placeholders"].items():
        assert cats.get(ph) == cat, (t["id"], ph, cat, cats.get(ph))
    return cats


def conclusion_index(t):
    # the held-out slot of an entailed typology: the rule's conclusion relation
    rule = RULE_BY_ID[t["rule"]]
    idxs = [i for i, e in enumerate(t["edges"])
            if e["relation"] == rule["conclusion"]["relation"]]
    assert len(idxs) == 1, t["id"]
    return idxs[0]


def cycle_edge_indices(t):
    # edges on some undirected cycle of the placeholder multigraph: an edge is
    # cyclic iff removing it keeps its endpoints connected
    n = len(t["edges"])
    out = []
    for i in range(n):
        adj = defaultdict(set)
        for j, e in enumerate(t["edges"]):
            if j == i:
                continue
            adj[e["subject"]].add(e["object"])
            adj[e["object"]].add(e["subject"])
        a, b = t["edges"][i]["subject"], t["edges"][i]["object"]
        seen, stack = {a}, [a]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if b in seen:
            out.append(i)
    return out


stats = defaultdict(lambda: [0, 0, 0, 0])  # total, derivable, known_unique, unknown
free_need = defaultdict(int)
anchor_need = defaultdict(int)

for t in TYPOLOGIES:
    cats = placeholder_categories(t)
    anchors = set(t["anchor_placeholders"])
    frees = [ph for ph in cats if ph not in anchors]
    n = t["count"]

    if t["policy"] == "entailed":
        heldouts = [conclusion_index(t)]
    else:
        heldouts = cycle_edge_indices(t)
        assert len(heldouts) >= 2, t["id"]
    # every held-out candidate must touch a free placeholder so unknown edges
    # stay unique per instance and never appear as training text elsewhere
    for i in heldouts:
        e = t["edges"][i]
        assert e["subject"] in frees or e["object"] in frees, (t["id"], i)

    # unique known triples contributed by this typology: free-involving known
    # slots are fresh per instance, anchored-anchored known slots collapse
    anch_known = 0
    free_known = None
    for h in heldouts:
        fk = ak = 0
        for i, e in enumerate(t["edges"]):
            if i == h:
                continue
            if e["subject"] in anchors and e["object"] in anchors:
                ak += 1
            else:
                fk += 1
        if free_known is None:
            free_known, anch_known = fk, ak
        else:
            assert (fk, ak) == (free_known, anch_known), (t["id"], "held-out-dependent stats")
    u = n * free_known + anch_known

    d = stats[t["domain"]]
    d[0] += n
    d[1] += n if t["policy"] == "entailed" else 0
    d[2] += u
    d[3] += n

    for ph in frees:
        free_need[cats[ph]] += n
    for ph in anchors:
        anchor_need[cats[ph]] += 1

total = [0, 0, 0, 0]
for dom, want in EXPECTED.items():
    got = stats[dom]
    assert tuple(got) == want, (dom, tuple(got), want)
    for i in range(4):
        total[i] += got[i]
assert total == [1245, 680, 2730, 1245], total
assert len(TYPOLOGIES) == 51, len(TYPOLOGIES)
n_ent = sum(1 for t in TYPOLOGIES if t["policy"] == "entailed")
assert n_ent == 30, n_ent
uniq = total[2] + (total[3] - total[1])
assert uniq == 3295, uniq
print("stats check ok:", dict(stats), "| typologies", len(TYPOLOGIES),
      "| entailed", n_ent, "| unique triples", uniq)

# ------------------------------------------------------------ entity pool

PERSON_FIRST = [
    "Aldric", "Berwin", "Caldra", "Doreth", "Elswin", "Fenira", "Gormund", "Halvena",
    "Isgar", "Jorveth", "Kestra", "Lohman", "Maribel", "Nostrin", "Odaline", "Pellam",
    "Quenric", "Rosavel", "Sambor", "Tilvina", "Ulbrecht", "Vestrid", "Wendaly", "Xandrel",
    "Ysolde", "Zebedia", "Ansgrim", "Bettrys", "Corvand", "Delphira", "Edmaer", "Folcwin",
    "Gislena", "Hadmar", "Ingelot", "Jessavin", "Kortmund", "Lavreth", "Mirgold", "Nedreth",
    "Osmunda", "Pratchel", "Quilvera", "Rannoch", "Sigbertha", "Tormwald", "Umfreda",
    "Volkhart", "Winnogene", "Yarwick",
]
PERSON_LAST = [
    "Ashgrove", "Bramblett", "Cindermoor", "Dunweather", "Everbright", "Farrowdale",
    "Gildersleeve", "Hollowbrook", "Ironwhistle", "Junipersong", "Kettleworth",
    "Larkspurrow", "Mossgarden", "Nettlefold", "Oakenshaw", "Pennyfeather", "Quartermaine",
    "Ravensmere", "Silverthorn", "Thistlewood", "Underbough", "Vexmoor", "Wintercress",
    "Yellowhammer", "Zephyrine", "Applethwaite", "Birchwhistle", "Cloverfield",
    "Drumnadroch", "Elderflower", "Foxwhelp", "Goldenrod", "Harrowgate", "Ivorydale",
    "Jackdawston", "Kingfisher", "Lampwright", "Mandrake", "Nightingale", "Otterburn",
    "Puddifoot", "Quickenberry", "Rushmore", "Saddlewick", "Tanglewood",
]
STEM_PRE = [
    "Vel", "Dor", "Kar", "Mol", "Tres", "Bryn", "Cal", "Fen", "Gor", "Hal", "Jor", "Kel",
    "Lor", "Mar", "Nor", "Osk", "Pel", "Quil", "Rav", "Sel", "Tor", "Ulv", "Vor", "Wex",
    "Yar", "Zel", "Ard", "Bel", "Cran", "Drel", "Esk", "Fal", "Gris", "Hov", "Ist", "Jen",
    "Kol", "Lum", "Mer", "Nev", "Ost", "Pra", "Rin", "Sta", "Tul", "Urm", "Vis", "Wol",
    "Yev", "Zan", "Bor", "Cum",
]
STEM_SUF = [
    "mora", "kell", "vane", "dysh", "grona", "barth", "cliffe", "denna", "fara", "gorod",
    "holm", "issa", "jarn", "kova", "lund", "menta", "nara", "ovia", "pont", "quessa",
    "rath", "senna", "thal", "umbra", "venn", "wyck", "xara", "ystad", "zenna", "brava",
    "corin", "dell", "ferro", "gaunt", "hurst", "ivar", "joss", "krona", "lyre", "mond",
    "nisse", "orla", "perro", "quade", "rosk", "stell", "tarn", "ulla",
]

SUFFIX_BY_CAT = {
    "village": "", "parish": "Parish", "church": "Church", "town": "", "estate": "Estate",
    "county": "", "house": "House", "duchy": "", "hamlet": "", "valley": "Vale",
    "cemetery": "Cemetery", "borough": "", "clan": "Clan", "region": "",
    "chapel": "Chapel", "dell": "Hollow", "shire": "", "march": "March", "realm": "",
    "abbey": "Abbey", "diocese": "Diocese", "deanery": "Deanery", "palatinate": "",
    "crownland": "", "manor": "Manor", "bailiwick": "Bailiwick", "canton": "Canton",
    "prefecture": "Prefecture", "kingdom": "", "priory": "Priory", "township": "",
    "hundred": "Hundred", "barony": "Barony", "chantry": "Chantry", "glebe": "Glebe",
    "wapentake": "Wapentake", "lordship": "",
    "chambers": "Chambers", "firm": "Associates", "consortium": "Consortium",
    "clinic": "Clinic", "trust": "Trust", "foundation": "Foundation", "bureau": "Bureau",
    "works": "Works", "combine": "Combine", "desk": "Desk", "newspaper": "Gazette",
    "syndicate": "Syndicate", "kitchen": "Kitchen", "restaurant": "Bistro",
    "group": "Hospitality", "branch": "Branch", "bank": "Bank", "exchange": "Exchange",
    "fleet": "Fleet", "line": "Shipping", "registry": "Registry",
    "city": "", "country": "",
    "artwork": "Portrait", "gallery": "Gallery", "statue": "Statue", "plaza": "Plaza",
    "fresco": "Fresco", "nave": "Nave", "basilica": "Basilica", "quarter": "Quarter",
    "institute": "Institute", "university": "University", "metropolis": "",
    "observatory": "Observatory", "academy": "Academy", "journal": "Journal",
    "society": "Society",
    "citadel": "Citadel", "fortress": "Fortress", "battle": "Offensive",
    "orchestra": "Orchestra", "hall": "Philharmonic", "capital": "", "label": "Records",
    "collective": "Collective", "conservatory": "Conservatory", "fund": "Fund",
    "empire": "", "province": "", "state": "", "territory": "", "republic": "",
    "dominion": "",
    "team": "Rovers", "league": "League", "federation": "Federation", "squad": "Athletic",
    "grounds": "Grounds", "club": "Club", "crew": "Crew", "regatta": "Regatta",
    "port": "Harbour", "gym": "Gymnasium", "promotion": "Promotions",
    "commission": "Commission",
}

person_combos = [f"{a} {b}" for a, b in itertools.product(PERSON_FIRST, PERSON_LAST)]
RNG.shuffle(person_combos)
stems = [a + b for a, b in itertools.product(STEM_PRE, STEM_SUF)]
RNG.shuffle(stems)
stem_iter = iter(stems)

needed = defaultdict(int)
for cat, n in free_need.items():
    needed[cat] += n
for cat, n in anchor_need.items():
    needed[cat] += n

pool = {}
person_iter = iter(person_combos)
for cat in sorted(needed):
    n = needed[cat] + max(4, needed[cat] // 10)
    names = []
    if cat == "person":
        for _ in range(n):
            names.append(next(person_iter))
    else:
        suf = SUFFIX_BY_CAT[cat]
        for _ in range(n):
            stem = next(stem_iter)
            names.append(stem + (" " + suf if suf else ""))
    pool[cat] = names

# anchors: bind fixed entities per typology, reserving pool entries
reserved = defaultdict(int)
for t in TYPOLOGIES:
    bound = {}
    for ph in sorted(t["anchor_placeholders"]):
        cat = t["anchor_placeholders"][ph]
        bound[ph] = pool[cat][reserved[cat]]
        reserved[cat] += 1
    t["anchors"] = bound
    del t["anchor_placeholders"]

# global substring-freedom across every entity name
all_names = sorted(n for names in pool.values() for n in names)
assert len(all_names) == len(set(all_names)), "duplicate entity name"
by_len = sorted(all_names, key=len)
for i, a in enumerate(by_len):
    for b in by_len[i + 1:]:
        if len(b) > len(a) and a in b:
            raise SystemExit(f"substring collision: {a!r} in {b!r}")

template_text = " ".join(
    " ".join(r["statement_templates"]) + " " + r["query_template"] for r in REL_ROWS)
for name in all_names:
    assert name not in template_text, name

print("pool:", {c: len(v) for c, v in sorted(pool.items())},
      "| total entities", len(all_names))

# ---------------------------------------------------------------- emit

NOTE = ("Synthetic reconstruction of the relation bank: the published benchmark "
        "does not ship its typology or relation files, so these were rebuilt to "
        "match the published per-domain dataset statistics exactly.")

with open(f"{OUT_DIR}/relations.json", "w") as f:
    json.dump({"_note": NOTE, "relations": REL_ROWS}, f, indent=1)
    f.write("\n")
with open(f"{OUT_DIR}/rules.json", "w") as f:
    json.dump({"_note": NOTE, "rules": RULES}, f, indent=1)
    f.write("\n")
with open(f"{OUT_DIR}/typologies.json", "w") as f:
    json.dump({"_note": NOTE, "typologies": TYPOLOGIES}, f, indent=1)
    f.write("\n")
with open(f"{OUT_DIR}/entity_pool.json", "w") as f:
    json.dump({"_note": NOTE, "categories": pool}, f, indent=1)
    f.write("\n")
print("wrote", OUT_DIR)
