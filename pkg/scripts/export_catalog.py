"""
Export the built-in catalog and the preset doubles to a JSON file
"""

import argparse
import json
import os
import sys
from datetime import datetime

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from catalog import builtin_entries, entry_export
from forbid_engine import double_theory
from group_core import resolve_group
from modular_data import export_theory
from presets import preset_names


def export_catalog(out_file=None):
    """Write every catalog entry plus D(G) of each preset group"""
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    out_file = out_file or f"catalog_{timestamp}.json"

    payload = {
        "catalog": [entry_export(e).model_dump() for e in builtin_entries()],
        "doubles": {name: export_theory(double_theory(resolve_group(name))).model_dump()
                    for name in preset_names()},
    }

    with open(out_file, "w") as f:
        json.dump(payload, f, indent=2)

    print(f"✅ Exported {len(payload['catalog'])} catalog entries and "
          f"{len(payload['doubles'])} doubles to {out_file}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.strip())
    parser.add_argument("--out", default=None)
    export_catalog(parser.parse_args().out)
