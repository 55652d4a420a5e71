"""Run the default sextic search and record the screening funnel and shortlist classes.

The window stage of the funnel is read from the profile histogram written by
calibrate_search.py, when it is present.
"""

import argparse
import json
import os
import time
from collections import Counter
from dataclasses import asdict

from maxcurve.registry import registry_load
from maxcurve.search import SearchConfig, digits_to_index, model_digits, rational_points, run_search, sextic_space


def window_count(hist_path: str, cfg: SearchConfig) -> int | None:
    if not os.path.exists(hist_path):
        return None
    with open(hist_path) as fh:
        rows = json.load(fh)["profiles"]
    return sum(r["count"] for r in rows if bool(cfg.prefilter(r["n9"], r["n27"], r["singular"])))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--histogram", default="results/search_profile.json")
    ap.add_argument("--out", default="results/search_summary.json")
    ap.add_argument("--shortlist", default="results/shortlist.txt")
    args = ap.parse_args()

    cfg = SearchConfig(threads=args.threads)
    t0 = time.perf_counter()
    res = run_search(cfg)
    elapsed = time.perf_counter() - t0

    basis = sextic_space(rational_points())
    target = digits_to_index(model_digits(basis, registry_load().get_model("C.sextic2").plane_curve().equation))
    classes = Counter()
    for c in res.shortlist:
        s = asdict(c.stats)
        classes[tuple(sorted(s.items()))] += 1
    summary = {
        "elapsed_s": round(elapsed, 1),
        "threads": args.threads,
        "funnel": {
            "candidates": res.processed,
            "inside_windows": window_count(args.histogram, cfg),
            "accepted": res.accepted,
        },
        "windows": {"n9": cfg.n9_window, "n27": cfg.n27_window, "rational_singular": cfg.singular_range},
        "profiles": cfg.profiles,
        "sextic_index": target,
        "sextic_accepted": target in {c.index for c in res.shortlist},
        "classes": [dict(k, candidates=n) for k, n in sorted(classes.items(), key=lambda kv: -kv[1])],
    }
    with open(args.out, "w") as fh:
        json.dump(summary, fh, indent=1)
    with open(args.shortlist, "wb") as fh:
        fh.write(res.shortlist_bytes())
    print(json.dumps(summary["funnel"]), f"{elapsed:.1f}s", f"{len(classes)} classes")


if __name__ == "__main__":
    main()
