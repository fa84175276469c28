import os
import sys

# make the shared helpers (discrete_refs) importable regardless of invocation dir
sys.path.insert(0, os.path.dirname(__file__))
