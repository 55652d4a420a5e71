"""Tabulate the (n9, n27, rational singular points) profile of every candidate sextic.

The histogram is what the default screening windows are calibrated against.
"""

import argparse
import json
import time

from maxcurve.search import profile_histogram


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/search_profile.json")
    args = ap.parse_args()
    t0 = time.perf_counter()
    hist = profile_histogram()
    rows = [{"n9": a, "n27": b, "singular": c, "count": n} for (a, b, c), n in sorted(hist.items())]
    with open(args.out, "w") as fh:
        json.dump({"elapsed_s": round(time.perf_counter() - t0, 1), "profiles": rows}, fh, indent=1)
    print(f"{sum(hist.values())} candidates, {len(rows)} profiles, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
