#!/usr/bin/env python3
"""Step-by-step hand oracle for the hourly dispatch, in exact rational
arithmetic. Writes the 24-hour fixtures read by the C++ dispatch tests.

Rules written out independently of the engine:
  1. PV serves the load first.
  2. Surplus charges the plugged-in share of the pool, limited by the
     chargers (share * n * P per hour) and by the free space of the present
     share divided by the charge efficiency.
  3. What is left is exported, above an optional export cap it is curtailed.
  4. A deficit is met by the present share, limited by the chargers and by
     the energy above the floor times the discharge efficiency.
  5. The rest comes from the grid.
  6. After the hour the pool fades linearly with discharged energy measured
     in full-cycle equivalents of the nameplate; at the threshold the
     batteries are replaced (fade back to 1). Stored energy keeps its
     state-of-charge fraction and is clamped to the window.

Usage: dispatch_oracle.py OUTPUT_DIR
"""

import sys
from fractions import Fraction as F
from pathlib import Path


def run_case(case):
    n = F(case["n_vehicles"])
    cap = F(case["capacity_per_vehicle"])
    lo, hi = F(case["soc_min"]), F(case["soc_max"])
    power = F(case["charger_power"])
    eff = F(case["efficiency"])
    fade_rate = F(case["fade_per_fce"])
    threshold = F(case["replacement_threshold"])
    export_cap = None if case["export_cap"] is None else F(case["export_cap"])

    nameplate = n * cap
    fade = F(1)
    energy = (lo + hi) / 2 * nameplate
    replacements = 0
    rows = []
    for hour, (pv, load, share) in enumerate(zip(case["pv"], case["load"], case["availability"])):
        pv, load, share = F(pv), F(load), F(share)
        usable = fade * nameplate
        floor, ceiling = lo * usable, hi * usable

        direct = min(pv, load)
        surplus = pv - direct
        deficit = load - direct

        charger = share * n * power
        space = max(share * (ceiling - energy), F(0))
        above_floor = max(share * (energy - floor), F(0))

        to_batt = min(surplus, charger, space / eff) if share > 0 else F(0)
        energy += to_batt * eff
        spill = surplus - to_batt
        if export_cap is not None and spill > export_cap:
            to_grid, curtailed = export_cap, spill - export_cap
        else:
            to_grid, curtailed = spill, F(0)

        from_batt = min(deficit, charger, above_floor * eff) if share > 0 else F(0)
        drawn = from_batt / eff
        energy -= drawn
        from_grid = deficit - from_batt

        if drawn > 0:
            new_fade = fade - fade_rate * drawn / nameplate
            if new_fade <= threshold:
                replacements += 1
                new_fade = F(1)
            energy = energy * new_fade / fade
            fade = new_fade
            usable = fade * nameplate
            energy = min(max(energy, lo * usable), hi * usable)

        rows.append([hour, pv, load, share, direct, to_batt, to_grid, from_batt, from_grid, curtailed,
                     energy, fade, replacements])
    return rows


def square_wave(on, off_value, on_value, start, stop):
    return [on_value if start <= h < stop else off_value for h in range(on)]


def cases():
    base = dict(n_vehicles=3, capacity_per_vehicle=40, soc_min="0.5", soc_max="0.95", charger_power=6,
                efficiency="0.95", fade_per_fce="0.2/3000", replacement_threshold="0.8", export_cap=None)
    load_flat = [8] * 24
    always = [1] * 24
    out = {}

    # Midday surplus of 22 kWh/h against 18 kWh/h of chargers; evening deficit 28 kWh/h.
    out["power_capped"] = dict(base, pv=square_wave(24, 0, 30, 10, 14),
                               load=[8] * 18 + [36] * 3 + [8] * 3, availability=always)

    # Small batteries fill up after one hour of charging.
    out["headroom_capped"] = dict(base, capacity_per_vehicle=10, pv=square_wave(24, 0, 20, 9, 15),
                                  load=load_flat, availability=always)

    # Long evening deficit drains the pool to its floor.
    out["reserve_capped"] = dict(base, capacity_per_vehicle=8, charger_power=10, pv=[0] * 24,
                                 load=[12] * 24, availability=always)

    # One car in three away 08:00-18:00.
    out["partial_availability"] = dict(base, pv=square_wave(24, 0, 26, 9, 16),
                                       load=[6] * 18 + [20] * 6,
                                       availability=[1] * 8 + [F(2, 3)] * 10 + [1] * 6)

    # Export cap forces curtailment once the pool is full.
    out["export_capped"] = dict(base, capacity_per_vehicle=5, export_cap=4, pv=square_wave(24, 0, 25, 8, 16),
                                load=load_flat, availability=always)

    # Aggressive fade so the batteries are replaced within the day.
    out["replacement"] = dict(base, fade_per_fce="0.5", pv=square_wave(24, 0, 40, 6, 12),
                              load=[4] * 12 + [30] * 12, availability=always)

    # Square-wave PV alternating every three hours, no storage pressure.
    out["square_wave"] = dict(base, pv=[0, 0, 0, 12, 12, 12] * 4, load=[7] * 24, availability=always)
    return out


def fmt(x):
    return repr(float(x))


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    target = Path(sys.argv[1])
    target.mkdir(parents=True, exist_ok=True)
    for name, case in cases().items():
        for key in ("soc_min", "soc_max", "efficiency", "fade_per_fce", "replacement_threshold"):
            num, _, den = str(case[key]).partition("/")
            case[key] = F(num) / F(den or 1)
        rows = run_case(case)
        lines = [f"# case: {name}"]
        for key in ("n_vehicles", "capacity_per_vehicle", "soc_min", "soc_max", "charger_power", "efficiency",
                    "fade_per_fce", "replacement_threshold"):
            lines.append(f"# {key}: {fmt(case[key])}")
        lines.append(f"# export_cap: {'none' if case['export_cap'] is None else fmt(case['export_cap'])}")
        lines.append("hour,pv,load,availability,pv_to_load,pv_to_batt,pv_to_grid,batt_to_load,grid_to_load,"
                     "curtailed,energy,fade,replacements")
        for r in rows:
            lines.append(",".join([str(r[0])] + [fmt(v) for v in r[1:12]] + [str(r[12])]))
        (target / f"dispatch_{name}.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
