#!/usr/bin/env python3
"""
MatchEnt - Main Entry Point

Matching polynomials, matching entropy and bound verification for
regular and biregular bipartite graphs.
"""

import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent))

from cli import run


# ==================== ENTRY POINT ====================

def main():
    """Main entry point."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
