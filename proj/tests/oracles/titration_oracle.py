"""Independent model of recipes/titration.recipe.

Tracks moles with fractions, applies H+ + OH- -> H2O by hand, mixes
temperatures by volume, adds neutralisation heat to the water, interpolates
pKw and solves the charge-balance quadratic. Prints the pH and temperature
after each step so the recipe's expect bounds can be checked against it.
"""
import csv
import json
import math
from fractions import Fraction as F
from pathlib import Path

DATA = Path(__file__).resolve().parents[2] / "data"
species = {s["name"]: s for s in json.load(open(DATA / "species.json"))}
nodes = [(float(r["temperature_c"]), float(r["pKw"])) for r in csv.DictReader(open(DATA / "kw_table.csv"))]

dH = species["H2O"]["enthalpy_kj_per_mol"] - species["H+"]["enthalpy_kj_per_mol"] - species["OH-"]["enthalpy_kj_per_mol"]
C, RHO = 4.18, 1000.0


def pkw(t):
    for (t0, p0), (t1, p1) in zip(nodes, nodes[1:]):
        if t0 <= t <= t1:
            return p0 + (p1 - p0) * (t - t0) / (t1 - t0)
    raise ValueError(t)


def ph(h, oh, v, t):
    kw = 10 ** -pkw(t)
    c = float(h - oh) / float(v)
    if c >= 0:
        ch = (c + math.sqrt(c * c + 4 * kw)) / 2
    else:
        coh = (-c + math.sqrt(c * c + 4 * kw)) / 2
        ch = kw / coh
    return -math.log10(ch)


# create acid {HCl: 0.001 mol} volume 0.1 L ; base {NaOH: 0.01 mol} volume 0.1 L
acid = {"H+": F(1, 1000), "v": F(1, 10), "t": 25.0}
base = {"OH-": F(1, 100), "v": F(1, 10), "t": 25.0}
flask = {"H+": F(0), "OH-": F(0), "v": F(0), "t": 25.0}


def pour(src, dst, vol, key):
    moved = src[key] * vol / src["v"]
    src[key] -= moved
    src["v"] -= vol
    newv = dst["v"] + vol
    if dst["v"] == 0:
        dst["t"] = src["t"]
    else:
        w = float(vol / newv)
        dst["t"] += (src["t"] - dst["t"]) * w
    dst[key] += moved
    dst["v"] = newv
    n = min(dst["H+"], dst["OH-"])
    if n > 0:
        dst["H+"] -= n
        dst["OH-"] -= n
        heat = -float(n) * dH
        dst["t"] += heat * 1000 / (C * RHO * float(newv))


pour(acid, flask, F(5, 100), "H+")
rows = [("acid", ph(flask["H+"], flask["OH-"], flask["v"], flask["t"]), flask["t"])]
for i in range(1, 8):
    pour(base, flask, F(1, 1000), "OH-")
    rows.append((f"base x{i}", ph(flask["H+"], flask["OH-"], flask["v"], flask["t"]), flask["t"]))
for label, p, t in rows:
    print(f"{label:8s} pH={p:.6f} temp={t:.6f}")
