import sys
from pathlib import Path

# make tests/util.py and tests/oracles.py importable regardless of invocation dir
sys.path.insert(0, str(Path(__file__).resolve().parent))
