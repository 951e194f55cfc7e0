#!/usr/bin/env python3
"""Brute-force tabulation of per-session metrics and condition summaries.

Written independently of the C++ implementation: plain counting loops and the
statistics module. Prints JSON in the same shape as `creo analyze --json`.
"""
import json
import statistics
import sys

STAGES = ["Viewpoint", "Composition", "Color", "Lighting", "Style"]
KEYS = {
    "direction_changes": None,
    "breadth": None,
    "drift_pct": ("intent", "drift"),
    "pivot_pct": ("intent", "pivot"),
    "construct_pct": ("action_type", "construct"),
    "evaluate_pct": ("action_type", "evaluate"),
    "generate_pct": ("action_type", "generate"),
    "refine_pct": ("action_type", "refine"),
    "repair_pct": ("action_type", "repair"),
    "agency_pct": ("agency", "user_driven"),
    "violation_pct": ("invariant_violation", True),
    "revision_burden": None,
}


def load(paths):
    recs = []
    for p in paths:
        with open(p) as f:
            for line in f:
                if line.strip():
                    recs.append(json.loads(line))
    return recs


def by_session(recs):
    order, groups = [], {}
    for r in recs:
        if r["session_id"] not in groups:
            order.append(r["session_id"])
            groups[r["session_id"]] = []
        groups[r["session_id"]].append(r)
    return [groups[s] for s in order]


def row(sess):
    n = len(sess)
    out = {"session_id": sess[0]["session_id"], "condition": sess[0]["condition"], "actions": n}
    for key, match in KEYS.items():
        if match is None:
            continue
        field, value = match
        count = 0
        for r in sess:
            if r[field] == value:
                count += 1
        out[key] = 100.0 * count / n
    out["direction_changes"] = float(sum(1 for r in sess if r["direction_change"]))
    out["breadth"] = float(len({r["iteration_id"] for r in sess}))
    out["revision_burden"] = sum(1 for r in sess if r["action_type"] == "repair") / n
    return out


def summaries(rows):
    conds = []
    for r in rows:
        if r["condition"] not in conds:
            conds.append(r["condition"])
    out = []
    for c in conds:
        sub = [r for r in rows if r["condition"] == c]
        s = {"condition": c, "sessions": len(sub)}
        for key in KEYS:
            vals = [r[key] for r in sub]
            s[key] = {"mean": statistics.fmean(vals), "sd": statistics.stdev(vals) if len(vals) > 1 else 0.0}
        out.append(s)
    return out


def stage_usage(recs):
    sessions = by_session(recs)
    share = {s: 0 for s in STAGES}
    adopt = {s: 0 for s in STAGES}
    revisits = skips = 0
    for sess in sessions:
        seq = [STAGES.index(r["stage"]) for r in sess]
        for i in seq:
            share[STAGES[i]] += 1
        for i in set(seq):
            adopt[STAGES[i]] += 1
        if any(seq[k] < seq[k - 1] for k in range(1, len(seq))):
            revisits += 1
        if any(i not in seq for i in range(max(seq))):
            skips += 1
    total = len(recs)
    return {
        "sessions": len(sessions),
        "actions": total,
        "action_share": {s: 100.0 * share[s] / total for s in STAGES},
        "adoption": {s: 100.0 * adopt[s] / len(sessions) for s in STAGES},
        "revisit_rate": 100.0 * revisits / len(sessions),
        "skip_rate": 100.0 * skips / len(sessions),
    }


def main(paths):
    recs = load(paths)
    rows = [row(s) for s in by_session(recs)]
    out = {"rows": rows, "summaries": summaries(rows)}
    if all("stage" in r for r in recs):
        out["stage_usage"] = stage_usage(recs)
    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main(sys.argv[1:])
