"""Export the computed operators of a preset as JSON matrices."""

import argparse
import sys

from kmatlab import cli
from kmatlab.presets import get_preset


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--preset", default="sl3-aiv")
    p.add_argument("--target", default="quasi-k",
                   choices=("quasi-k", "tensor-k", "r", "trig-r",
                            "trig-k", "trig-tensor-k"))
    p.add_argument("--out", default=None)
    args = p.parse_args(argv)
    preset = get_preset(args.preset)
    built = preset.build()
    doc = cli.compute_target(args.target, preset, built, None)
    cli._emit(doc, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
