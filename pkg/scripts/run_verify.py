"""Run verification suites and write their JSON reports to a directory."""

import argparse
import json
from pathlib import Path

from cotree_lab.verify import ACCEPTANCE_ORDER, RunConfig, verify_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("suites", nargs="*", default=ACCEPTANCE_ORDER)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("reports"))
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig(seed=args.seed)
    failed = 0
    for name in args.suites:
        report = verify_suite(name, cfg)
        (args.out / f"{name}.json").write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
        status = "ok" if report.ok else "FAIL"
        failed += not report.ok
        print(f"{name:16s} {status:4s} {report.instances:6d} instances {report.wall_time:7.1f}s")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
