"""Command line wrapper: figures <kind> --in <csv...> --out <img>."""

import argparse
import sys
from typing import List, Optional

from .io import MissingColumnError
from .render import KINDS, FigureJob, render


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render simulator CSV outputs as figures (SVG default)")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        help="input CSV file(s); spectrum takes an optional "
                             "broadened curve as a second input")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--window", help="energy window 'lo,hi' in eV")
    parser.add_argument("--manifest",
                        help="run manifest for the cavity frequency "
                             "(default: manifest.txt next to the first input)")
    parser.add_argument("--colormap", default="viridis")
    args = parser.parse_args(argv)
    window = None
    if args.window:
        try:
            lo, hi = (float(x) for x in args.window.split(","))
        except ValueError:
            print(f"bad --window {args.window!r}; expected 'lo,hi'",
                  file=sys.stderr)
            return 2
        window = (lo, hi)
    job = FigureJob(kind=args.kind, inputs=args.inputs, output=args.out,
                    window=window, colormap=args.colormap,
                    manifest=args.manifest)
    try:
        facts = render(job)
    except (MissingColumnError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out} ({', '.join(f'{k}={v}' for k, v in facts.items())})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
