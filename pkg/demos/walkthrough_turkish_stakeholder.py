"""
A conflict-free resolution: every tie broken by path length alone
=================================================================

The bundled "turkish" stakeholder fixture is interesting for the opposite
reason as its counterpart: its ends-means map contains ten nodes with
several ends each, yet every one of them is resolved by the shortest-
root-path rule alone -- the client is never asked a single question.
"""

from cogmaps import ScriptedProvider, fixtures, formats, pipeline
from cogmaps.tree import PruneEvent

# %% run the whole pipeline; the decision script is empty on purpose
doc = formats.parse_map(fixtures.read("turkish.cm.map.json"))
mapping = formats.parse_value_mapping(fixtures.read("turkish.mapping.json"))
result = pipeline.run_pipeline(doc, ScriptedProvider({}, strict=True), mapping)
assert result.stage == "vt_done"
assert not result.transcript.entries, "no client decisions expected"

# %% every conflict fell to pruning; show which arcs were eliminated
prunes = [e for e in result.tree_trace.events if isinstance(e, PruneEvent)]
labels = formats.to_emm(result.emm_doc).labels()
print(f"{len(prunes)} conflicts, all resolved by shortest-path pruning:\n")
for e in prunes:
    kept = ", ".join(labels[k] for k in e.kept)
    for end, mean in e.dropped:
        print(f"  {labels[mean]}:")
        print(f"    dropped end {labels[end]!r} (kept {kept})")

# %% the result is already an arborescence
tree = formats.to_tree(result.tree_doc)
print(f"\nvalue tree: {len(tree.nodes)} nodes, {len(tree.arcs)} arcs, root {tree.labels()[tree.root]!r}")
widths = {}
for parent, _ in tree.arcs:
    widths[parent] = widths.get(parent, 0) + 1
busiest = max(widths, key=widths.get)
print(f"widest node: {tree.labels()[busiest]!r} with {widths[busiest]} children")
