#!/usr/bin/env python3
"""Run every acceptance campaign and print one ACCEPT line per campaign.

    python3 scripts/run_campaigns.py            # full size
    python3 scripts/run_campaigns.py --scale 0.1
"""

import argparse
import sys

from piregulation.campaigns import all_campaigns


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scale", type=float, default=1.0, help="multiply every instance count")
    args = parser.parse_args()
    ok = True
    for result in all_campaigns(args.scale):
        print(result.format(), flush=True)
        ok &= result.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
