"""Run the full finite-type verification suite over all finite presets."""

import sys
import time

from kmatlab.presets import PRESETS
from kmatlab import cli
from kmatlab.report import make_report, all_passed, render


def main():
    rc = 0
    for name in ("split-sl2", "sl3-aiv", "sl3-aiii"):
        preset = PRESETS[name]
        built = preset.build()
        t0 = time.time()
        checks = []
        checks += cli.verify_qsp_relations(preset, built)
        checks += cli.verify_ybe(preset, built)
        checks += cli.verify_k_suite(preset, built)
        checks += cli.verify_tensor_k_suite(preset, built)
        checks += cli.verify_classical_limit(preset, built)
        checks += cli.verify_groupoid(preset, built)
        rep = make_report(name, checks)
        ok = all_passed(rep)
        rc |= 0 if ok else 1
        print(render(rep))
        print("%s: %s in %.1fs" % (name, "PASS" if ok else "FAIL",
                                   time.time() - t0), file=sys.stderr)
    return rc


if __name__ == "__main__":
    sys.exit(main())
