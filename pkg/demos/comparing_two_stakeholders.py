"""
Finding common ground between two stakeholders' value trees
===========================================================

Once each stakeholder's cognitive map has been reduced to a value tree,
the trees can be scanned for label-similar nodes: candidate shared values
that a facilitator can put on the table. The comparison is deliberately
shallow -- token overlap after stemming -- because judging whether two
values really coincide is the analyst's call, not the library's.
"""

from cogmaps import ScriptedProvider, compare_trees, fixtures, formats, pipeline


def tree_for(name: str):
    doc = formats.parse_map(fixtures.read(f"{name}.cm.map.json"))
    mapping = formats.parse_value_mapping(fixtures.read(f"{name}.mapping.json"))
    answers = formats.parse_decision_script(fixtures.read(f"{name}.decisions.json"))
    result = pipeline.run_pipeline(doc, ScriptedProvider(answers), mapping)
    assert result.stage == "vt_done"
    return formats.to_tree(result.tree_doc)


# %% build both trees from their recorded sessions
tree_a = tree_for("kurdish")
tree_b = tree_for("turkish")
print(f"stakeholder A: {len(tree_a.nodes)} values; stakeholder B: {len(tree_b.nodes)} values")

# %% label-similar pairs above the default threshold
pairs = compare_trees(tree_a, tree_b, threshold=0.25)
print(f"\n{len(pairs)} candidate shared values (similarity >= 0.25):\n")
for p in pairs:
    print(f"  {p.similarity:4.2f}  {p.label_a!r} (depth {p.depth_a})")
    print(f"        ~ {p.label_b!r} (depth {p.depth_b})")

# %% exact agreements deserve a highlight
exact = [p for p in pairs if p.similarity == 1.0]
print(f"\nidentical labels: {[(p.label_a, p.depth_a, p.depth_b) for p in exact]}")
print("depth matters: a value near one stakeholder's root may be a leaf for the other.")
