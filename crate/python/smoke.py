"""Smoke test for the glorenz_py extension module.

Build with `cargo build -p glorenz-py --features extension-module --release`,
then copy target/release/libglorenz_py.so to glorenz_py.so somewhere on
PYTHONPATH (or `maturin develop` inside crates/python).
"""

import json
import tempfile

import glorenz_py as g

m = g.MapModel(0.6, 0.3)
assert m.lambda_min >= g.PHI, m.lambda_min
assert abs(m.q1 - 0.6) < 1e-12 and abs(m.q2 - 0.3) < 1e-12
p1, p2 = m.fixed_points()
assert p1 is not None and p2 is not None

verdict = m.classify()
print("classify(0.6, 0.3):", verdict["stratum"], verdict["dynamics"])

k = m.kneading(20)
print("kneading:", dict(k))
w = m.itinerary(0.1, 10)
letters = w.split()
assert len(letters) == 10, w
prefix = " ".join(letters[:3])
start, end, mid = m.realize(prefix)
assert m.itinerary(mid, 3) == prefix
assert m.is_admissible(w, 10)

span = m.attractor_span()
print("span length:", span["length"], "full:", span["full"])

s = g.SkewModel(m, kappa=0.2)
cones = s.verify_cones(200, 20)
assert cones["cone_violations"] == 0 and cones["product_violations"] == 0, cones
pts = s.cloud(8, 2000, seed=1)
assert all(0.0 <= x < 1.0 and -1.0 <= y <= 1.0 for x, y in pts)

assert g.golden_bound(0.5, 0.5, 1.8)[2]
assert g.lex_compare("A0", "A1") != 0
print("degree:", g.family_degree("rotation"))

try:
    g.MapModel(0.6, 0.3, theta1=0.45)
except ValueError as e:
    print("rejected:", e)
else:
    raise AssertionError("weak expansion accepted")

with tempfile.TemporaryDirectory() as d:
    cfg = json.dumps({"model": {"alpha": 0.6, "beta": 0.3}})
    print("wrote:", g.run("classify", cfg, d))

print("ok")
