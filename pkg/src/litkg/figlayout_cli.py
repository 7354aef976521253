"""figlayout: segment one figure layout file into aligned subfigures.

Pure local transform: reads a layout JSON (regions, text boxes, caption),
writes the subfigure records with subcaptions, leftovers, and groundings.
An optional alias file (``alias<TAB>entity_id`` lines) enables grounding.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .figure_layout import analyze_layout, layout_result_to_json


def _load_aliases(path: str) -> dict[str, str]:
    index = {}
    for line in Path(path).read_text("utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        alias, _, entity_id = line.partition("\t")
        if entity_id:
            index[alias] = entity_id
    return index


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="figlayout", description=__doc__)
    parser.add_argument("layout", help="layout JSON file")
    parser.add_argument("-o", "--out", default=None, help="output path (default: stdout)")
    parser.add_argument("--aliases", default=None, help="alias<TAB>entity_id file for grounding")
    args = parser.parse_args(argv)

    layout = json.loads(Path(args.layout).read_text("utf-8"))
    alias_index = _load_aliases(args.aliases) if args.aliases else None
    result = analyze_layout(layout, alias_index=alias_index)
    output = layout_result_to_json(result)
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
