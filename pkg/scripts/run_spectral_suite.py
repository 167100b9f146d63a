"""Run the spectral (affine sl2) verification suite over both spectral
presets: rational K-matrices, unitarity, series quotients, the
two-variable Yang-Baxter identity, and the two-variable reflection
equation."""

import sys
import time

from kmatlab.presets import PRESETS
from kmatlab import cli
from kmatlab.config import default_order
from kmatlab.report import make_report, all_passed, render


def main():
    rc = 0
    order = default_order()
    for name in ("qonsager", "aug-qonsager"):
        preset = PRESETS[name]
        built = preset.build()
        t0 = time.time()
        checks = []
        checks += cli.verify_qsp_relations(preset, built)
        checks += cli.verify_ybe(preset, built)
        checks += cli.verify_k_suite(preset, built)
        checks += cli.verify_tensor_k_suite(preset, built, order=order)
        checks += cli.verify_spectral_re(preset, built)
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
