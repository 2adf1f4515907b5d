#!/usr/bin/env python3
"""Writes data/benchmark.case.json, the synthetic 14-bus benchmark microgrid.

Three radial feeders hang off the point of common coupling (B0): a domestic
feeder B1-B5, an industrial feeder B6-B8 and a commercial feeder B9-B13.
Profiles are hand-shaped; rerun after editing and commit the JSON.
"""

import json
import math
from pathlib import Path

HOURS = 24

DOMESTIC = [0.45, 0.40, 0.38, 0.37, 0.38, 0.45, 0.60, 0.75, 0.70, 0.60, 0.55, 0.55,
            0.60, 0.55, 0.50, 0.55, 0.65, 0.80, 0.95, 1.00, 0.95, 0.85, 0.70, 0.55]
INDUSTRIAL = [0.50, 0.48, 0.47, 0.47, 0.50, 0.60, 0.75, 0.90, 1.00, 1.00, 0.98, 0.95,
              0.90, 0.95, 0.98, 0.95, 0.90, 0.80, 0.70, 0.65, 0.60, 0.55, 0.52, 0.50]
COMMERCIAL = [0.30, 0.28, 0.27, 0.27, 0.28, 0.32, 0.45, 0.65, 0.85, 0.95, 1.00, 1.00,
              0.98, 1.00, 0.98, 0.95, 0.90, 0.85, 0.75, 0.60, 0.50, 0.42, 0.36, 0.32]

# EUR ct/kWh
PRICE = [8.5, 8.0, 8.0, 8.0, 8.5, 10.0, 14.0, 20.0, 24.0, 26.0, 28.0, 30.0,
         29.0, 27.0, 25.0, 24.0, 26.0, 30.0, 36.0, 38.0, 35.0, 28.0, 18.0, 11.0]

WIND = [9.0, 10.5, 11.0, 12.0, 11.5, 10.0, 8.5, 7.0, 6.0, 5.0, 4.5, 3.5,
        3.0, 3.5, 4.0, 5.0, 6.5, 8.0, 9.5, 11.0, 12.5, 14.0, 13.0, 11.0]


def solar(peak):
    out = []
    for t in range(HOURS):
        x = (t + 0.5 - 6.0) / 14.0
        out.append(round(peak * math.sin(math.pi * x) ** 1.5, 4) if 0.0 < x < 1.0 else 0.0)
    return out


# Scales every load point so the grid-only day costs about 530 EUR.
LOAD_SCALE = 0.85


def scaled(shape, peak):
    return [round(LOAD_SCALE * peak * s, 4) for s in shape]


def feeder(first, count, upstream, r_ohm, x_ohm):
    buses, branches = [], []
    prev = upstream
    for k in range(count):
        bus = f"B{first + k}"
        buses.append({"id": bus, "kind": "load"})
        branches.append({"id": f"L{first + k}", "from": prev, "to": bus,
                         "r_ohm": r_ohm[k], "x_ohm": x_ohm[k]})
        prev = bus
    return buses, branches


def build():
    buses = [{"id": "B0", "kind": "slack"}]
    branches = []
    for first, count, r, x in [
        (1, 5, [0.050, 0.045, 0.040, 0.035, 0.030], [0.020, 0.018, 0.016, 0.014, 0.012]),
        (6, 3, [0.030, 0.025, 0.020], [0.015, 0.012, 0.010]),
        (9, 5, [0.045, 0.040, 0.035, 0.030, 0.025], [0.018, 0.016, 0.014, 0.012, 0.010]),
    ]:
        b, br = feeder(first, count, "B0", r, x)
        buses += b
        branches += br
    for b in buses:
        if b["id"] in ("B3", "B4", "B5", "B8", "B12", "B13"):
            b["kind"] = "generation"

    loads = []
    for k, peak in zip(range(1, 6), [10.0, 9.0, 11.0, 10.0, 9.5]):
        loads.append({"bus": f"B{k}", "category": "domestic", "power_factor": 0.9,
                      "profile_kw": scaled(DOMESTIC, peak)})
    for k, peak in zip(range(6, 9), [17.0, 19.0, 18.0]):
        loads.append({"bus": f"B{k}", "category": "industrial", "power_factor": 0.85,
                      "profile_kw": scaled(INDUSTRIAL, peak)})
    for k, peak in zip(range(9, 14), [11.0, 12.0, 10.5, 11.5, 10.0]):
        loads.append({"bus": f"B{k}", "category": "commercial", "power_factor": 0.9,
                      "profile_kw": scaled(COMMERCIAL, peak)})

    units = [
        {"name": "PV1", "kind": "PV", "bus": "B4", "p_min_kw": 0.0, "p_max_kw": 3.0,
         "cost_slope": 54.84, "cost_fixed": 0.0, "dispatchable": False, "availability_kw": solar(3.0)},
        {"name": "PV2", "kind": "PV", "bus": "B12", "p_min_kw": 0.0, "p_max_kw": 10.0,
         "cost_slope": 54.84, "cost_fixed": 0.0, "dispatchable": False, "availability_kw": solar(10.0)},
        {"name": "WT", "kind": "WT", "bus": "B8", "p_min_kw": 0.0, "p_max_kw": 15.0,
         "cost_slope": 10.63, "cost_fixed": 0.0, "dispatchable": False, "availability_kw": WIND},
        {"name": "MT", "kind": "MT", "bus": "B5", "p_min_kw": 6.0, "p_max_kw": 30.0,
         "cost_slope": 4.37, "cost_fixed": 85.06, "dispatchable": True},
        {"name": "FC", "kind": "FC", "bus": "B13", "p_min_kw": 3.0, "p_max_kw": 30.0,
         "cost_slope": 2.86, "cost_fixed": 255.8, "dispatchable": True},
    ]

    return {
        "format_version": 1,
        "name": "benchmark-14bus",
        "horizon": HOURS,
        "period_length_h": 1.0,
        "base": {"voltage_kv": 0.4, "power_kva": 100.0},
        "voltage_limits": {"min": 0.94, "max": 1.05},
        "grid": {"import_limit_kw": 300.0, "export_limit_kw": 300.0, "allow_export": True},
        "prices": {"grid_eur_ct_per_kwh": PRICE},
        "buses": buses,
        "branches": branches,
        "loads": loads,
        "units": units,
        "battery": {"bus": "B3", "soc_min_kwh": 16.0, "soc_max_kwh": 40.0, "p_max_kw": 4.0,
                    "eta_charge": 0.9, "eta_discharge": 0.9, "self_discharge_per_h": 0.002,
                    "soc_initial_kwh": 24.0, "usage_cost": 0.38},
        "reliability": {
            "contingencies": [
                {"id": "TR", "element": "transformer", "lambda_per_h": 0.001, "repair_h": 4.0},
                {"id": "F1", "element": "L1", "lambda_per_h": 0.0005, "repair_h": 2.0},
                {"id": "F2", "element": "L6", "lambda_per_h": 0.0005, "repair_h": 2.0},
                {"id": "F3", "element": "L9", "lambda_per_h": 0.0005, "repair_h": 2.0},
            ],
            "outage_costs": {"domestic": 50.0, "industrial": 100.0, "commercial": 150.0},
        },
        "demand_response": {
            "shiftable_fraction": 0.15,
            "participation": {"domestic": True, "industrial": True, "commercial": True},
            "shift_cost": 0.0,
        },
        "weights": {
            "judgment_matrix": [[1, 1 / 3, 1 / 2, 2], [3, 1, 2, 5], [2, 1 / 2, 1, 3], [1 / 2, 1 / 5, 1 / 3, 1]],
            "direct": [0.157, 0.483, 0.272, 0.088],
        },
    }


def main():
    out = Path(__file__).resolve().parent.parent / "data" / "benchmark.case.json"
    out.parent.mkdir(exist_ok=True)
    out.write_text(json.dumps(build(), indent=2) + "\n")
    print(out)


if __name__ == "__main__":
    main()
