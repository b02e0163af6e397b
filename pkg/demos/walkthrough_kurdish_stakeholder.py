"""
End-to-end walkthrough: from a stakeholder's cognitive map to a value tree
==========================================================================

This script runs the bundled "kurdish" stakeholder fixture through every
stage of the pipeline and narrates what happens at each one:

1. the raw cognitive map (concepts + signed influence arcs) is validated,
2. an analyst-authored value mapping turns concepts into values,
3. label propagation turns the value map into an ends-means map,
4. multiple-predecessor conflicts are resolved into a value tree, with
   the client's recorded answers replayed from a decision script.
"""

from cogmaps import (
    ScriptedProvider,
    fixtures,
    formats,
    pipeline,
)

# %% 1. load and validate the raw interview material
doc = formats.parse_map(fixtures.read("kurdish.cm.map.json"))
print(f"cognitive map: {len(doc.nodes)} concepts, {len(doc.arcs)} influence arcs")
negative = [a for a in doc.arcs if a["sign"] == "-"]
print(f"negative influences: {[(a['from'], a['to']) for a in negative]}")

# %% 2. the analyst's concept -> value translation
mapping = formats.parse_value_mapping(fixtures.read("kurdish.mapping.json"))
dropped = [cid for cid, e in mapping.entries if e.value is None]
print(f"mapping covers {len(mapping.entries)} concepts, drops {dropped or 'none'}")

# %% 3. the client's recorded answers (captured in an earlier session)
answers = formats.parse_decision_script(fixtures.read("kurdish.decisions.json"))
print(f"decision script holds {len(answers)} answers")

# %% 4. run the whole pipeline with those answers scripted
result = pipeline.run_pipeline(doc, ScriptedProvider(answers), mapping)
assert result.stage == "vt_done"

vcm = formats.to_vcm(result.vcm_doc)
print(f"\nvalue cognitive map: {len(vcm.nodes)} values, fundamental = {vcm.fundamental!r}")

emm = formats.to_emm(result.emm_doc)
negated = sorted(n.id for n in emm.nodes if n.negated)
print(f"ends-means map: {len(emm.nodes)} literals, negated ones: {negated}")

# %% 5. what the client was asked, and what they answered
print("\ndecision transcript:")
for entry in result.transcript.entries:
    print(f"  [{entry.kind}] {entry.answer!r} (source: {entry.source})")

# %% 6. the finished value tree, printed as an indented outline
tree = formats.to_tree(result.tree_doc)
children = {}
for parent, child in sorted(tree.arcs):
    children.setdefault(parent, []).append(child)


def show(node, depth=0):
    n = tree.node(node)
    marker = {"merged": " [merged]", "split": " [split]"}.get(n.provenance.kind, "")
    print("  " * depth + f"- {n.label}{marker}")
    for c in children.get(node, []):
        show(c, depth + 1)


print("\nvalue tree:")
show(tree.root)
