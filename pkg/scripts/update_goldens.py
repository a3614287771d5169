"""Re-render the golden SVG files under tests/golden/ from the shipped corpus.

Run after an intentional change to the renderers, then review the diff.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from kabaddi.cli import run_cli  # noqa: E402
from test_acceptance import GOLDEN_PLOTS  # noqa: E402

GOLDEN = ROOT / "tests" / "golden"


def main() -> int:
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in GOLDEN_PLOTS.items():
        code = run_cli([*argv, "--data-dir", str(ROOT / "data"), "-o", str(GOLDEN / name)])
        if code:
            return code
        print(f"wrote tests/golden/{name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
