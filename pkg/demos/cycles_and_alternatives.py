"""
Feedback cycles, suspension, and the space of alternative results
=================================================================

When two values reinforce each other, the ends-means relation acquires a
directed cycle that must be broken. If one arc of the cycle starts
strictly farther from the fundamental value, it is eliminated silently;
when there is a tie the run suspends and asks the client. This demo
builds the smallest map with a genuine tie, shows the suspension, and
then enumerates every result reachable by answering differently.
"""

from cogmaps import (
    DecisionTranscript,
    InfluenceArc,
    Node,
    ScriptedProvider,
    Sign,
    ValueCognitiveMap,
    run_algorithm1,
)
from cogmaps.decisions import UnansweredDecision
from cogmaps import formats

# %% two mutually reinforcing values, both one step from the fundamental
vcm = ValueCognitiveMap(
    nodes=(
        Node("wellbeing", "valuing wellbeing"),
        Node("health", "valuing health"),
        Node("exercise", "valuing exercise"),
    ),
    arcs=frozenset(
        {
            InfluenceArc("health", "wellbeing", Sign.POSITIVE),
            InfluenceArc("exercise", "wellbeing", Sign.POSITIVE),
            InfluenceArc("health", "exercise", Sign.POSITIVE),
            InfluenceArc("exercise", "health", Sign.POSITIVE),
        }
    ),
    fundamental="wellbeing",
)

# %% a strict scripted run with no answers suspends at the tie
try:
    run_algorithm1(vcm, ScriptedProvider({}, strict=True), DecisionTranscript())
except UnansweredDecision as e:
    request = e.request
    print("run suspended on a client decision:")
    print(f"  id:      {request.id}")
    print(f"  prompt:  {request.prompt}")
    print(f"  options: {list(request.options)}")

# %% enumerate both answers and compare the resulting maps
print("\nalternative results:")
for option in request.options:
    emm, trace = run_algorithm1(
        vcm, ScriptedProvider({request.id: option}), DecisionTranscript()
    )
    event = trace.cycle_events()[0]
    print(f"  answering {option!r}: eliminated {event.eliminated_arc}, arcs = {sorted(emm.arcs)}")

# %% the two choices differ by exactly one arc, and each is a valid map
texts = set()
for option in request.options:
    emm, _ = run_algorithm1(vcm, ScriptedProvider({request.id: option}), DecisionTranscript())
    texts.add(formats.emit_map(formats.from_emm(emm)))
print(f"\ndistinct serialized results: {len(texts)} (one per answer)")
