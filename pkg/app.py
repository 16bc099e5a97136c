"""
Legendre Duality Toolkit - command-line entry

Run from the project root without installing:
    python app.py figure fig-sine-dual --range 7pi
"""
import sys
from pathlib import Path

# Make `src` importable when run from a checkout
sys.path.insert(0, str(Path(__file__).parent))

from src.cli.main import main  # noqa: E402

if __name__ == "__main__":
    raise SystemExit(main())
