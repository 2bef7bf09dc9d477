"""Run every suite over the built-in families for several dimensions and print a table."""

import argparse
import time

from isotropic.opfn import OperatorFunction
from isotropic.symfn import families
from isotropic.verify import SUITES, SampleConfig, run_suites


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", default="2,3,5")
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    failures = 0
    for dim in (int(d) for d in args.dims.split(",")):
        start = time.perf_counter()
        fops = [OperatorFunction(spec) for spec in families(dim)]
        cfg = SampleConfig(dim=dim, samples=args.samples, seed=args.seed)
        reports = run_suites(fops, list(SUITES), cfg, only_applicable=True)
        print(f"n = {dim}: {len(reports)} reports in {time.perf_counter() - start:.1f}s")
        for r in reports:
            flag = "ok  " if r.passed else "FAIL"
            print(f"  {flag} {r.property:<18} {r.function:<12} worst {r.worst_violation:.3e}  tol {r.tolerance:.1e}")
            failures += not r.passed
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
