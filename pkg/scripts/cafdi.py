#!/usr/bin/env python3
"""
CAFDI Command Line Wrapper

Runs the toolkit CLI from a source checkout without installing it.

Usage:
    python scripts/cafdi.py design --out results/
    python scripts/cafdi.py run --scenario zero-dynamics --plot --out results/

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli.app import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
