"""Time full_report on a sparse synthetic graph for several worker counts.

    python scripts/bench_metrics.py --nodes 5000 --edges 15000 --workers 1 2 4
"""
import argparse
import json
import os
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from helpers import sparse_connected_graph  # noqa: E402

from collabnet.metrics import full_report  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--nodes", type=int, default=5000)
    ap.add_argument("--edges", type=int, default=15000)
    ap.add_argument("--workers", type=int, nargs="+", default=[1, 2, 4])
    ap.add_argument("--seed", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    full_report(sparse_connected_graph(200, 600, args.seed))  # compile / load the kernel
    print(f"cpus: {os.cpu_count()}  graph: {args.nodes} nodes, {args.edges} edges")
    base, reports = None, set()
    for w in args.workers:
        times = []
        for _ in range(args.repeat):
            g = sparse_connected_graph(args.nodes, args.edges, args.seed)
            t = time.perf_counter()
            r = full_report(g, workers=w)
            times.append(time.perf_counter() - t)
            reports.add(json.dumps(r.to_dict(), sort_keys=True))
        best = min(times)
        base = base or best
        print(f"workers={w:<3d} best {best:7.3f}s  speedup {base / best:5.2f}x")
    print("reports identical" if len(reports) == 1 else "REPORTS DIFFER")
    return 0 if len(reports) == 1 else 1


if __name__ == "__main__":
    sys.exit(main())
