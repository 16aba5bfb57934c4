"""Regenerate p3_family.jsonl: every (Delta, gamma)-module of order <= 81 for p = 3."""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from families import exhaustive_modules  # noqa: E402

if __name__ == "__main__":
    out = Path(__file__).with_name("p3_family.jsonl")
    with open(out, "w", encoding="utf-8") as fh:
        for M in exhaustive_modules(3, 4):
            fh.write(json.dumps(M.to_json(), sort_keys=True) + "\n")
