#!/usr/bin/env python3
"""Authoring aid for the push_notification rule files.

Terms are mapped to ordinals 1..3 (low..high) and consequents come from the
monotone heuristics below. Rules are emitted per target in product order with
the first input varying slowest, numbered continuously through each file.

    python3 tools/gen_push_rules.py scenarios/push_notification
"""

import itertools
import math
import sys
from pathlib import Path

BANDWIDTH = ("BandwidthRate", ["LBandwidth", "MBandwidth", "HBandwidth"])
DELAY = ("NetworkDelay", ["Ldelay", "Mdelay", "Hdelay"])
ENERGY = ("DumpEnergy", ["LEnergy", "MEnergy", "HEnergy"])
MEMORY = ("AvailableMemory", ["SMemory", "MMemory", "LMemory"])
LOCATING = ("LocatingOption", ["Network", "GPS"])
SIZE = ("ReceivedDataSize", ["SSize", "MSize", "LSize"])
INTERVAL = ("UpdateTimeInterval", ["STime", "MTime", "LTime"])
SAT = ["LSat", "MSat", "HSat"]


def level(x):
    """Round half up and clamp to 1..3."""
    return min(3, max(1, math.floor(x + 0.5)))


def time_eff(b, d, e):
    if e == 1:
        return 1
    return level(0.5 * e + 0.25 * b + 0.25 * (4 - d))


def energy_eff(d, e, m):
    return level(0.6 * (4 - e) + 0.2 * (4 - m) + 0.2 * d)


def info_eff(b, e, m):
    if e == 1:
        return 1
    return level(0.5 * e + 0.25 * b + 0.25 * m)


def locating(b, e, m):
    return 2 if e == 3 else 1


def data_size(d, e, m):
    # first-fold rules size by memory alone; energy is left to readaptation
    return m


def interval(b, d, e):
    return 4 - level(0.5 * b + 0.5 * (4 - d))


def cor_time(loc, s, i):
    return level(1 + 0.5 * (loc - 1) + 0.5 * (3 - s) + 0.5 * (3 - i))


def cor_energy(loc, s, i):
    return level(3.5 - ((loc - 1) + 0.5 * (s - 1) + 0.5 * (3 - i)))


def cor_info(s, i):
    return level(1 + 0.5 * (s - 1) + 0.5 * (3 - i))


def block(inputs, output, fn):
    lines = []
    for combo in itertools.product(*[range(1, len(v[1]) + 1) for v in inputs]):
        clauses = " and ".join(f"({v[0]} is {v[1][k - 1]})" for v, k in zip(inputs, combo))
        out_name, out_terms = output
        lines.append(f"If {clauses} then ({out_name} is {out_terms[fn(*combo) - 1]}) (1)")
    return lines


def emit(path, header, blocks):
    lines = [f"# {header}"]
    n = 0
    for title, rules in blocks:
        lines.append(f"# {title}")
        for r in rules:
            n += 1
            lines.append(f"{n}. {r}")
    path.write_text("\n".join(lines) + "\n")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    emit(out / "upd.rules", "UPD: atomic contexts -> desired satisfaction", [
        ("sg1 HighTimeEfficiency", block([BANDWIDTH, DELAY, ENERGY], ("HighTimeEfficiency", SAT), time_eff)),
        ("sg2 HighEnergyEfficiency", block([DELAY, ENERGY, MEMORY], ("HighEnergyEfficiency", SAT), energy_eff)),
        ("sg3 HighInformationEfficiency", block([BANDWIDTH, ENERGY, MEMORY], ("HighInformationEfficiency", SAT), info_eff)),
    ])
    emit(out / "ena.rules", "ENA: atomic contexts -> task configurations", [
        ("t12 LocatingOption", block([BANDWIDTH, ENERGY, MEMORY], LOCATING, locating)),
        ("t3 ReceivedDataSize", block([DELAY, ENERGY, MEMORY], SIZE, data_size)),
        ("t4 UpdateTimeInterval", block([BANDWIDTH, DELAY, ENERGY], INTERVAL, interval)),
    ])
    emit(out / "cor.rules", "COR: task configurations -> actual satisfaction", [
        ("sg1 HighTimeEfficiency", block([LOCATING, SIZE, INTERVAL], ("HighTimeEfficiency", SAT), cor_time)),
        ("sg2 HighEnergyEfficiency", block([LOCATING, SIZE, INTERVAL], ("HighEnergyEfficiency", SAT), cor_energy)),
        ("sg3 HighInformationEfficiency", block([SIZE, INTERVAL], ("HighInformationEfficiency", SAT), cor_info)),
    ])


if __name__ == "__main__":
    main()
