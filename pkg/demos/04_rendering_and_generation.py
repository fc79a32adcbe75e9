"""Rendering features to SVG and generating candidates from game shape.

Writes one diagram per fixture feature into demos/out/ (white disks =
friendly, black = enemy, dotted = the triggering last move, green plus =
encouraged action, red minus = discouraged), then enumerates candidate
features for hex and scores one against the MCTS baseline.
"""

from pathlib import Path

import geoweave as gw
from geoweave.dsl import serialize_feature
from geoweave.featuregen import GenConfig, evaluate_feature_set, generate_candidates
from geoweave.svg import render_feature

FIXTURES = Path(__file__).parent.parent / "fixtures"
OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

for name, game in [("bridge", "hex7"), ("line4", "line4-7x7"),
                   ("group3", "hex7"), ("thin_group", "hex7")]:
    rules = gw.game_from_name(game)
    fs = gw.load_feature_set(FIXTURES / f"{name}.fs")
    for i, feature in enumerate(fs.features):
        path = OUT / f"{name}_{i}.svg"
        path.write_text(render_feature(feature, rules.graph))
    print(f"rendered {len(fs)} {name} feature(s) for {game}")

print(f"\nSVGs in {OUT}")

rules = gw.hex_rules(5)
candidates = generate_candidates(rules, GenConfig(max_elements=2, max_walk_length=1))
print(f"\ncandidates for hex with <=2 elements over 1-step walks: {len(candidates)}")
print("first few:")
for f in candidates[:4]:
    print("  " + serialize_feature(f))

grow = next(f for f in candidates if "el={0}:o" in serialize_feature(f))
record = evaluate_feature_set(gw.FeatureSet((grow,), "grow"), rules, games=40, seed=3, playouts=50)
print(f"\n'friend adjacent, play next to it' vs vanilla MCTS over 40 games: "
      f"win rate {record.win_rate:.2f}, CI [{record.ci_low:.2f}, {record.ci_high:.2f}]")
print("(weight tuning: see `geoweave tune --help`)")
